from collections.abc import Callable
from enum import Enum
from types import MethodType


class Event(Enum):

    def __str__(self):
        return self.value


class ExperimentEvent(Event):
    EXPERIMENT_BEGIN = 'experiment_begin'
    EXPERIMENT_END = 'experiment_end'
    CELL_BEGIN = 'cell_begin'
    CELL_END = 'cell_end'
    RUN_END = 'run_end'


class Listener(Callable):
    """Reacts to experiment events through ``on_<event>`` methods.

    Handlers can also be attached per instance::

        >>> listener = Listener(name='printer',
        ...                     on_cell_end=lambda self, data: print(data))
    """
    name = None

    def __init__(self, **handlers):
        self.name = handlers.pop('name', self.name)
        if not isinstance(self.name, str) or not self.name:
            raise TypeError('listener.name must be a non-empty str')
        for event, func in handlers.items():
            if not callable(func):
                raise ValueError("handler of '{}' is not callable: {}"
                                 .format(event, func))
            setattr(self, self.handler_name(event), MethodType(func, self))

    def has_handler(self, event):
        return callable(getattr(self, self.handler_name(event), None))

    def get_handler(self, event):
        return getattr(self, self.handler_name(event))

    def __call__(self, event, data=None):
        return self.get_handler(event)(data)

    @staticmethod
    def handler_name(event):
        event = str(event)
        return event if event.startswith('on_') else 'on_' + event


class Dispatcher(object):
    """Delivers events to hooks, highest priority first; hooks of equal
    priority run in registration order."""
    EventClass = ExperimentEvent

    def __init__(self):
        self._hooks = {}
        self._listeners = {}

    def add_hook(self, event, hook, priority=100):
        entries = self._hooks.setdefault(event, [])
        if any(h == hook for _, h in entries):
            return
        entries.append((priority, hook))
        entries.sort(key=lambda entry: -entry[0])

    def remove_hook(self, event, hook):
        entries = self._hooks.get(event, [])
        self._hooks[event] = [(p, h) for p, h in entries if h != hook]

    def notify(self, event, data=None):
        for _, hook in list(self._hooks.get(event, ())):
            hook(data)

    def add_listener(self, listener, priority=100):
        self.check_listener(listener)
        if listener.name in self._listeners:
            return
        for event in self.EventClass:
            if listener.has_handler(event):
                self.add_hook(event, listener.get_handler(event), priority)
        self._listeners[listener.name] = listener

    def remove_listener(self, listener):
        if isinstance(listener, str):
            listener = self._listeners[listener]
        self.check_listener(listener)
        if self._listeners.get(listener.name) is not listener:
            return
        for event in self.EventClass:
            if listener.has_handler(event):
                self.remove_hook(event, listener.get_handler(event))
        del self._listeners[listener.name]

    def has_listener(self, name):
        return name in self._listeners

    def get_listener(self, name):
        return self._listeners[name]

    @staticmethod
    def check_listener(listener):
        if not isinstance(listener, Listener):
            raise ValueError("listener is not a Listener object: {}"
                             .format(listener))
