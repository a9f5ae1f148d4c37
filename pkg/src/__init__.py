# GENESIM - 遗传算法合并决策树集成
# 将 bagging / boosting 得到的多棵决策树合并为一棵可解释的决策树
