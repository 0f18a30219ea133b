"""
__init__.py
"""


from .parsing import parse_vintage, parse_vintage_files
from .preparation import assign_regime, clean, join_and_label, label_defaults
from .sampling import allocate, customer_status, stratified_sample
from .encoding import Encoder, encode

__all__ = [
    "parse_vintage",
    "parse_vintage_files",
    "assign_regime",
    "clean",
    "join_and_label",
    "label_defaults",
    "allocate",
    "customer_status",
    "stratified_sample",
    "Encoder",
    "encode",
]
