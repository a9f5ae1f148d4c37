# Web界面模块