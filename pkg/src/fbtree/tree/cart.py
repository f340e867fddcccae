"""CART regression trees.

Trees are grown greedily by squared-error reduction, pruned by weakest-link
cost-complexity pruning and selected on an independent test sample with the
one-standard-error rule.

A grown tree keeps its nodes in flat arrays (parent index < child index).
Subtrees produced by pruning share those arrays and differ only in the mask
of nodes treated as terminal.
"""

from collections import namedtuple
import numbers

import numpy as np

from fbtree.errors import InvalidArgumentError, check_positive


DEFAULT_MIN_LEAF = 5


def _node_mean(ys):
    first = ys[0]
    if np.all(ys == first):
        return first
    return ys.mean()


Split = namedtuple('Split', ['feature', 'threshold', 'left', 'right'])
Leaf = namedtuple('Leaf', ['mean', 'count', 'sse'])


class RegressionTree(object):

    def __init__(self, feature, threshold, left, right, value, count, sse,
                 n_features, terminal=None):
        self._feature = feature
        self._threshold = threshold
        self._left = left
        self._right = right
        self._value = value
        self._count = count
        self._sse = sse
        self._n_features = n_features
        if terminal is None:
            terminal = left < 0
        terminal.flags.writeable = False
        self._terminal = terminal
        self._reachable = None

    @property
    def n_features(self):
        return self._n_features

    @property
    def n_train(self):
        return int(self._count[0])

    @property
    def n_leaves(self):
        return int(np.count_nonzero(self.reachable & self._terminal))

    @property
    def n_nodes(self):
        return int(np.count_nonzero(self.reachable))

    @property
    def mse(self):
        leaves = self.reachable & self._terminal
        return float(self._sse[leaves].sum() / self.n_train)

    @property
    def reachable(self):
        if self._reachable is None:
            reach = np.zeros(self._left.size, dtype=bool)
            reach[0] = True
            for i in range(self._left.size):
                if reach[i] and not self._terminal[i]:
                    reach[self._left[i]] = True
                    reach[self._right[i]] = True
            reach.flags.writeable = False
            self._reachable = reach
        return self._reachable

    @property
    def root(self):
        return self._node(0)

    def _node(self, i):
        if self._terminal[i]:
            return Leaf(float(self._value[i]), int(self._count[i]),
                        float(self._sse[i]))
        return Split(int(self._feature[i]), float(self._threshold[i]),
                     self._node(self._left[i]), self._node(self._right[i]))

    def apply(self, x):
        """Index of the terminal node each row of ``x`` falls in."""
        x = self._check_input(x)
        idx = np.zeros(x.shape[0], dtype=np.intp)
        rows = np.arange(x.shape[0])
        active = ~self._terminal[idx]
        while active.any():
            node = idx[active]
            go_left = x[rows[active], self._feature[node]] \
                <= self._threshold[node]
            idx[active] = np.where(go_left, self._left[node],
                                   self._right[node])
            active = ~self._terminal[idx]
        return idx

    def predict(self, x):
        return self._value[self.apply(x)]

    def refit(self, x, y):
        """Returns the same partition with node means, counts and errors
        recomputed on ``(x, y)``. Nodes no sample reaches keep their value."""
        x, y = _as_training_data(x, y)
        x = self._check_input(x)
        value = self._value.copy()
        count = np.zeros_like(self._count)
        sse = np.zeros_like(self._sse)
        members = {0: np.arange(y.size)}
        for i in range(self._left.size):
            index = members.pop(i, None)
            if index is None:
                continue
            ys = y[index]
            count[i] = ys.size
            if ys.size:
                value[i] = _node_mean(ys)
                sse[i] = float(np.sum((ys - value[i]) ** 2))
            if not self._terminal[i]:
                go_left = x[index, self._feature[i]] <= self._threshold[i]
                members[self._left[i]] = index[go_left]
                members[self._right[i]] = index[~go_left]
        return RegressionTree(self._feature, self._threshold, self._left,
                              self._right, value, count, sse,
                              self._n_features, self._terminal.copy())

    def collapse(self, nodes):
        """Returns the subtree in which ``nodes`` become terminal."""
        terminal = self._terminal.copy()
        terminal[np.asarray(nodes, dtype=np.intp)] = True
        return RegressionTree(self._feature, self._threshold, self._left,
                              self._right, self._value, self._count, self._sse,
                              self._n_features, terminal)

    def branch_stats(self):
        """Per node: within-branch squared error and number of leaves."""
        size = self._left.size
        branch_sse = np.where(self._terminal, self._sse, 0.0)
        n_leaves = np.where(self._terminal, 1, 0)
        for i in range(size - 1, -1, -1):
            if not self._terminal[i]:
                branch_sse[i] = branch_sse[self._left[i]] \
                    + branch_sse[self._right[i]]
                n_leaves[i] = n_leaves[self._left[i]] \
                    + n_leaves[self._right[i]]
        return branch_sse, n_leaves

    def internal_nodes(self):
        return np.flatnonzero(self.reachable & ~self._terminal)

    def node_sse(self):
        return self._sse

    def dump(self):
        lines = []

        def _visit(i, depth):
            indent = '  ' * depth
            if self._terminal[i]:
                lines.append("{}leaf: mean={:.6g}, count={}".format(
                    indent, self._value[i], self._count[i]))
            else:
                lines.append("{}x[{}] <= {:.6g}".format(
                    indent, self._feature[i], self._threshold[i]))
                _visit(self._left[i], depth + 1)
                _visit(self._right[i], depth + 1)

        _visit(0, 0)
        return "\n".join(lines) + "\n"

    def _check_input(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1 and self._n_features == 1 and x.size != 1:
            x = x[:, None]
        elif x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self._n_features:
            raise InvalidArgumentError(
                "dimension mismatch: the tree was trained on {} features, "
                "got input of shape {}".format(self._n_features, x.shape))
        return x

    def __repr__(self):
        return "RegressionTree(n_leaves={}, n_train={}, mse={:.6g})".format(
            self.n_leaves, self.n_train, self.mse)


class PruneSequence(object):
    """Nested subtrees with increasing complexity parameters, ending at
    the root-only tree."""

    def __init__(self, alphas, trees):
        if len(alphas) != len(trees) or not trees:
            raise InvalidArgumentError("alphas and trees must be non-empty "
                                       "and of equal length")
        self._alphas = tuple(float(a) for a in alphas)
        self._trees = tuple(trees)

    @property
    def alphas(self):
        return self._alphas

    @property
    def trees(self):
        return self._trees

    def __len__(self):
        return len(self._trees)

    def __getitem__(self, key):
        return self._alphas[key], self._trees[key]

    def __iter__(self):
        return zip(self._alphas, self._trees)


def _as_training_data(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if y.ndim != 1:
        raise InvalidArgumentError(
            "responses must be a vector: shape {}".format(y.shape))
    if x.ndim != 2 or x.shape[0] != y.size:
        raise InvalidArgumentError(
            "predictors of shape {} do not match {} responses"
            .format(x.shape, y.size))
    if y.size == 0:
        raise InvalidArgumentError("empty training set")
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("responses must be finite")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("predictors must be finite")
    return x, y


def _best_split(x, y, min_leaf):
    n = y.size
    if np.all(y == y[0]):
        return None
    yc = y - y.mean()
    total = yc.sum()
    sse = float(yc @ yc)
    if n < 2 * min_leaf or sse <= 0.0:
        return None
    k = np.arange(1, n, dtype=np.float64)
    size_ok = (k >= min_leaf) & (n - k >= min_leaf)
    best_gain, best = 1e-12 * sse, None
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind='stable')
        xs = x[order, j]
        s1 = np.cumsum(yc[order])[:-1]
        gain = s1 ** 2 / k + (total - s1) ** 2 / (n - k) - total ** 2 / n
        gain[~(size_ok & (xs[:-1] < xs[1:]))] = -np.inf
        pos = int(np.argmax(gain))
        if gain[pos] > best_gain:
            threshold = 0.5 * (xs[pos] + xs[pos + 1])
            if not xs[pos] <= threshold < xs[pos + 1]:
                threshold = xs[pos]
            best_gain, best = gain[pos], (j, threshold)
    return best


def grow(x, y, min_leaf=DEFAULT_MIN_LEAF):
    """Greedy recursive partitioning maximizing the squared-error reduction.

    A node is not split when it holds fewer than ``2 * min_leaf`` samples,
    when its responses are all equal, or when no admissible split reduces
    the error. Ties go to the lowest feature index, then the smallest
    threshold.
    """
    x, y = _as_training_data(x, y)
    check_positive('min_leaf', min_leaf, integer=True)
    feature, threshold, left, right = [], [], [], []
    value, count, sse = [], [], []

    def _new_node(index):
        ys = y[index]
        mean = _node_mean(ys)
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        value.append(mean)
        count.append(ys.size)
        sse.append(float(np.sum((ys - mean) ** 2)))
        return len(value) - 1

    stack = [(_new_node(np.arange(y.size)), np.arange(y.size))]
    while stack:
        node, index = stack.pop()
        split = _best_split(x[index], y[index], min_leaf)
        if split is None:
            continue
        j, thr = split
        mask = x[index, j] <= thr
        feature[node], threshold[node] = j, thr
        left[node] = _new_node(index[mask])
        right[node] = _new_node(index[~mask])
        stack.append((right[node], index[~mask]))
        stack.append((left[node], index[mask]))

    return RegressionTree(np.array(feature, dtype=np.intp),
                          np.array(threshold, dtype=np.float64),
                          np.array(left, dtype=np.intp),
                          np.array(right, dtype=np.intp),
                          np.array(value, dtype=np.float64),
                          np.array(count, dtype=np.intp),
                          np.array(sse, dtype=np.float64),
                          x.shape[1])


def predict(tree, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != tree.n_features:
        raise InvalidArgumentError(
            "dimension mismatch: expected {} features, got shape {}"
            .format(tree.n_features, x.shape))
    return float(tree.predict(x[None, :])[0])


def prune_sequence(tree):
    """Weakest-link pruning down to the root.

    All internal nodes attaining the minimal link strength are pruned
    together, which keeps the complexity parameters strictly increasing.
    """
    n_train = tree.n_train
    sse = tree.node_sse()

    def _links(t):
        internal = t.internal_nodes()
        branch_sse, n_leaves = t.branch_stats()
        g = (sse[internal] - branch_sse[internal]) \
            / n_train / (n_leaves[internal] - 1)
        return internal, g

    internal, g = _links(tree)
    current = tree
    if internal.size and np.any(g <= 0.0):
        current = tree.collapse(internal[g <= 0.0])
    alphas, trees = [0.0], [current]
    while current.n_leaves > 1:
        internal, g = _links(current)
        g_min = g.min()
        current = current.collapse(internal[g <= g_min * (1 + 1e-10)])
        if g_min <= alphas[-1]:
            trees[-1] = current
        else:
            alphas.append(float(g_min))
            trees.append(current)
    return PruneSequence(alphas, trees)


def select_tree(seq, x_test, y_test, se_factor=1.0):
    """Smallest subtree whose test error is within ``se_factor`` standard
    errors of the minimum test error over the sequence.

    The default is the one-standard-error rule; ``se_factor=0`` returns the
    minimum-error subtree.
    """
    x_test, y_test = _as_training_data(x_test, y_test)
    if se_factor < 0.0:
        raise InvalidArgumentError(
            "se_factor must be non-negative: {}".format(se_factor))
    if len(seq) == 1:
        return seq.trees[0]
    n2 = y_test.size
    residuals = [y_test - tree.predict(x_test) for tree in seq.trees]
    errors = np.array([np.mean(r ** 2) for r in residuals])
    k0 = int(np.argmin(errors))
    r_min = errors[k0]
    se = np.sqrt(max(np.mean(residuals[k0] ** 4) - r_min ** 2, 0.0) / n2)
    bound = r_min + se_factor * se + 1e-12 * r_min
    admissible = [k for k in range(len(seq)) if errors[k] <= bound]
    k_best = min(admissible, key=lambda k: (seq.trees[k].n_leaves, -k))
    return seq.trees[k_best]


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def fit_with_holdout(x, y, min_leaf=DEFAULT_MIN_LEAF, holdout_fraction=0.5,
                     seed=0, se_factor=1.0, refit=False):
    """Grows on a random training part, prunes, and selects the subtree on
    the held-out part. With ``refit`` the selected partition gets its leaf
    means from all samples."""
    x, y = _as_training_data(x, y)
    n = y.size
    if n < 2:
        raise InvalidArgumentError(
            "holdout fitting needs at least 2 samples: {}".format(n))
    if not 0.0 < holdout_fraction < 1.0:
        raise InvalidArgumentError(
            "holdout_fraction must be in (0, 1): {}".format(holdout_fraction))
    perm = _as_rng(seed).permutation(n)
    n2 = min(max(int(round(holdout_fraction * n)), 1), n - 1)
    test, train = perm[:n2], perm[n2:]
    tree = grow(x[train], y[train], min_leaf)
    tree = select_tree(prune_sequence(tree), x[test], y[test], se_factor)
    if refit:
        tree = tree.refit(x, y)
    return tree


def best_min_leaf(x, y, candidates, n_folds=5, seed=0):
    """Minimum leaf size with the smallest cross-validated squared error.

    Ties go to the larger leaf size.
    """
    x, y = _as_training_data(x, y)
    candidates = sorted(set(candidates))
    if not candidates:
        raise InvalidArgumentError("candidates must not be empty")
    for c in candidates:
        if isinstance(c, bool) or not isinstance(c, numbers.Integral) \
                or c < 1:
            raise InvalidArgumentError(
                "min_leaf candidates must be positive ints: {!r}".format(c))
    check_positive('n_folds', n_folds, integer=True)
    folds = np.array_split(_as_rng(seed).permutation(y.size), n_folds)
    errors = np.zeros(len(candidates))
    for k, test in enumerate(folds):
        if test.size == 0:
            continue
        train = np.concatenate([f for m, f in enumerate(folds) if m != k])
        if train.size == 0:
            raise InvalidArgumentError(
                "fold {} has an empty training part".format(k))
        for c, min_leaf in enumerate(candidates):
            tree = grow(x[train], y[train], min_leaf)
            errors[c] += np.sum((y[test] - tree.predict(x[test])) ** 2)
    errors /= y.size
    best = errors.min()
    tied = np.flatnonzero(errors <= best + 1e-12 * max(best, 1e-300))
    return candidates[int(tied[-1])]
