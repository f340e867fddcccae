from fbtree.utils import collections  # NOQA
from fbtree.utils import logging  # NOQA
