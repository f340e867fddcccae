import argparse
from collections import OrderedDict
from configparser import ConfigParser, Error as ConfigParserError
import copy
import os
import sys

from fbtree.errors import ConfigError


class CmdlineArg(object):

    def __init__(self, *args, **kwargs):
        if not args:
            raise ValueError("at least one option string is required")
        self._names = [name.lstrip('-') for name
                       in sorted(args, key=len, reverse=True)]
        self._args = args
        self._kwargs = kwargs

    @property
    def names(self):
        return self._names

    @property
    def args(self):
        return self._args

    @property
    def kwargs(self):
        return self._kwargs

    def add_kwarg(self, name, value):
        self._kwargs[name] = value


def arg(*args, **kwargs):
    return CmdlineArg(*args, **kwargs)


class ArgDefinition(object):
    """Common arguments plus one argument table per command."""

    def __init__(self):
        self.common_args = OrderedDict()
        self.groups = []
        self.group_args = {}
        self.group_descriptions = {}

    def def_arg(self, name, value, group=None):
        value.add_kwarg('dest', name)
        if group is None:
            self.common_args[name] = value
        else:
            self.def_group(group)
            self.group_args[group][name] = value

    def def_group(self, group, **kwargs):
        if group not in self.groups:
            self.groups.append(group)
            self.group_args[group] = OrderedDict()
            self.group_descriptions[group] = kwargs
        elif kwargs:
            self.group_descriptions[group] = kwargs

    def find(self, key):
        """Definitions of ``key`` (a long option name) in any table."""
        found = []
        tables = [self.common_args] + [self.group_args[g] for g in self.groups]
        for table in tables:
            for name, value in table.items():
                if value.names[0] == key:
                    found.append((name, value))
        return found


class ArgParser(object):
    DEFAULT_FORMATTER_CLASS = argparse.ArgumentDefaultsHelpFormatter

    def __init__(self, prog=None, description=None):
        self._def = ArgDefinition()
        self._prog = prog
        self._description = description

    def add_arg(self, name, value, group=None):
        self._def.def_arg(name, value, group)

    def add_group(self, group, **kwargs):
        self._def.def_group(group, **kwargs)

    @property
    def groups(self):
        return list(self._def.groups)

    def parse(self, args=None, command=None, parents=(), definition=None):
        """Returns (command, command_args, common_args)."""
        if args is None:
            args = sys.argv[1:]
        args = list(args)
        _def = definition if definition is not None else self._def
        if not _def.groups:
            raise RuntimeError("at least one command should be defined")
        if command is not None:
            if command not in _def.groups:
                raise ValueError("undefined command: {}".format(command))
            args = [command] + args
        parser = self._init_parser(_def, parents)
        parsed = vars(parser.parse_args(args))
        group = parsed['command']
        command_args = {name: parsed[name] for name in _def.group_args[group]}
        common_args = {name: parsed[name] for name in _def.common_args}
        return group, command_args, common_args

    def _init_parser(self, _def, parents=()):
        parser = argparse.ArgumentParser(
            prog=self._prog, description=self._description,
            parents=list(parents),
            formatter_class=ArgParser.DEFAULT_FORMATTER_CLASS)
        for value in _def.common_args.values():
            parser.add_argument(*value.args, **value.kwargs)
        subparsers = parser.add_subparsers(
            title='commands', help='available commands', dest='command')
        subparsers.required = True
        for group in _def.groups:
            subparser = subparsers.add_parser(
                group, formatter_class=ArgParser.DEFAULT_FORMATTER_CLASS,
                **_def.group_descriptions[group])
            for value in _def.group_args[group].values():
                subparser.add_argument(*value.args, **value.kwargs)
        return parser


class ConfigArgParser(ArgParser):
    """ArgParser whose defaults can come from a flat ``key = value`` file.

    Keys are long option names without the leading dashes. Values are cast
    with the declared ``type`` and become defaults, so flags on the command
    line take precedence.
    """
    SECTION = 'config'

    def __init__(self, prog=None, description=None, default_config_file=None):
        super().__init__(prog, description)
        self._default_config_file = default_config_file
        self._source = None

    @property
    def source(self):
        return self._source

    def parse(self, args=None, command=None, config_text=None):
        if args is None:
            args = sys.argv[1:]
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument('--config', type=str,
                         default=self._default_config_file,
                         help='configuration file', metavar='FILE')
        pre.add_argument('--saveconfig', type=str,
                         help='save current configuration to file',
                         metavar='FILE')
        namespace, args = pre.parse_known_args(list(args))

        _def = copy.deepcopy(self._def)
        if config_text is None and namespace.config is not None:
            config_file = os.path.expanduser(namespace.config)
            if os.path.exists(config_file):
                with open(config_file, encoding='utf-8') as f:
                    config_text = f.read()
                self._source = config_file
            elif namespace.config != self._default_config_file:
                raise ConfigError('config', "file was not found: '{}'"
                                  .format(config_file))
        if config_text is not None:
            self.apply_config(_def, config_text)

        command, command_args, common_args = super().parse(
            args, command, parents=[pre], definition=_def)
        if namespace.saveconfig is not None:
            self.write_config(namespace.saveconfig, _def, command,
                              command_args)
        return command, command_args, common_args

    def apply_config(self, _def, text):
        values = read_config(text)
        for key, raw in values.items():
            found = _def.find(key)
            if not found:
                raise ConfigError(key, "unknown key")
            for name, value in found:
                value.kwargs['default'] = cast_value(key, raw, value)
                value.kwargs.pop('required', None)
        return values

    def write_config(self, file, _def, command, command_args):
        parser = ConfigParser()
        options = {}
        for name, value in command_args.items():
            if value is None:
                continue
            key = _def.group_args[command][name].names[0]
            if isinstance(value, (list, tuple)):
                value = ",".join(str(v) for v in value)
            options[key] = str(value)
        parser[self.SECTION] = options
        with open(os.path.expanduser(file), 'w', encoding='utf-8') as f:
            parser.write(f)


def read_config(text):
    """Flat ``key = value`` lines; a leading section header is optional."""
    if not text.lstrip().startswith('['):
        text = "[{}]\n".format(ConfigArgParser.SECTION) + text
    parser = ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except ConfigParserError as e:
        raise ConfigError('config', "malformed file: {}".format(
            str(e).splitlines()[0]))
    values = OrderedDict()
    for section in parser.sections():
        for key, value in parser.items(section):
            values[key.strip().lower()] = value.strip()
    return values


def cast_value(key, value, def_arg):
    """Casts a config string with the type declared for ``def_arg``."""
    kwargs = def_arg.kwargs
    if kwargs.get('action') == 'store_true':
        _type = boolean
    else:
        _type = kwargs.get('type', str)
    try:
        value = _type(value)
    except (TypeError, ValueError, argparse.ArgumentTypeError) as e:
        raise ConfigError(key, "invalid value {!r}: {}".format(value, e))
    choices = kwargs.get('choices')
    if choices is not None and value not in choices:
        raise ConfigError(key, "invalid choice {!r}, expected one of {}"
                          .format(value, ", ".join(map(str, choices))))
    return value


_BOOLEAN_STATES = {'1': True, 'yes': True, 'true': True, 'on': True,
                   '0': False, 'no': False, 'false': False, 'off': False}


def boolean(value):
    if isinstance(value, bool):
        return value
    try:
        return _BOOLEAN_STATES[value.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(
            "expected a boolean: {!r}".format(value))


def int_list(value):
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    try:
        return [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "expected comma-separated ints: {!r}".format(value))
