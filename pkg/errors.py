"""
构造过程中使用的异常类型
"""


class ConstructionError(Exception):
    """所有构造相关错误的基类"""


class ParameterError(ConstructionError):
    """参数不满足前置条件

    Args:
        message: 错误描述
        constraint: 被违反的约束名称
    """

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint

    def __str__(self):
        base = super().__str__()
        if self.constraint:
            return f"{base} [约束: {self.constraint}]"
        return base


class DomainError(ConstructionError):
    """点或数值不在运算的定义域内"""


class DimensionError(DomainError):
    """维度不匹配"""


class EmptyFamilyError(ParameterError):
    """截断后的Whitney族为空"""

    def __init__(self, message):
        super().__init__(message, constraint="min_side < side(parent)")
