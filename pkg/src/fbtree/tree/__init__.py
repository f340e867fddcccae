from fbtree.tree.cart import (  # NOQA
    DEFAULT_MIN_LEAF, Leaf, PruneSequence, RegressionTree, Split,
    best_min_leaf, fit_with_holdout, grow, predict, prune_sequence,
    select_tree)
