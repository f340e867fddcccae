from collections.abc import Mapping


class ImmutableDict(dict):

    def _readonly(self, *args, **kwargs):
        raise TypeError("'{}' object does not support item assignment"
                        .format(type(self).__name__))

    __setitem__ = _readonly
    __delitem__ = _readonly
    clear = _readonly
    update = _readonly
    setdefault = _readonly
    pop = _readonly
    popitem = _readonly


class ImmutableMap(Mapping):
    """Read-only mapping that is also hashable, so that problem parameters
    and run contexts can be compared and used as keys."""

    def __init__(self, *args, **kwargs):
        if len(args) > 1:
            raise TypeError('expected at most 1 arguments, got %d' % len(args))
        d = dict(args[0]) if args else {}
        d.update(kwargs)
        self.data = ImmutableDict(d)

    def __len__(self):
        return len(self.data)

    def __getitem__(self, key):
        if key in self.data:
            return self.data[key]
        raise KeyError(key)

    def __getattr__(self, name):
        data = self.__dict__.get('data')
        if data is not None and name in data:
            return data[name]
        raise AttributeError("'{}' object has no attribute '{}'"
                             .format(type(self).__name__, name))

    def __iter__(self):
        return iter(self.data)

    def __contains__(self, key):
        return key in self.data

    def __eq__(self, other):
        if isinstance(other, ImmutableMap):
            return dict(self.data) == dict(other.data)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.data.items(), key=lambda kv: kv[0])))

    def __getstate__(self):
        return dict(self.data)

    def __setstate__(self, state):
        self.data = ImmutableDict(state)

    def __repr__(self):
        return "{}({!r})".format(type(self).__name__, dict(self.data))

    def replace(self, **kwargs):
        return type(self)(self.data, **kwargs)
