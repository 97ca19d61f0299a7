# 诊断分析模块
