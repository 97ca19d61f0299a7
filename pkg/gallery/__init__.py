# 例子库: 正弦例子, 改造的Cantor函数, 乘积提升, 有限水平集诊断
