import os
import signal
import sys

import fbtree
from fbtree.errors import ConfigError, FbtreeError, NumericalError
from fbtree.utils import argparse, logging
from fbtree.utils.argparse import arg
from fbtree.utils.collections import ImmutableMap


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class AppBase(object):
    """Command registry and run loop.

    Commands are plain functions taking keyword arguments; their return
    value is the exit code (None means success).
    """
    _commands = {}
    _argparser = argparse.ArgParser()
    debug = False

    @classmethod
    def add_command(cls, name, command, args=None, description=None):
        args = args or {}
        cls._argparser.add_group(name, help=description)
        for arg_name, value in args.items():
            cls.add_arg(arg_name, value, group=name)
        cls._commands[name] = command

    @classmethod
    def add_arg(cls, name, value, group=None):
        cls._argparser.add_arg(name, value, group)

    @classmethod
    def configure(cls, **kwargs):
        pass

    @classmethod
    def _parse_args(cls, args=None, command=None):
        return cls._argparser.parse(args, command=command)

    @classmethod
    def run(cls, args=None, command=None):
        """Parses ``args`` and runs the selected command.

        Returns 0 on success, 1 when a command fails and 2 on usage or
        configuration errors.
        """
        cls.configure()
        try:
            command, command_args, common_args = \
                cls._parse_args(args, command)
        except ConfigError as e:
            print("error: {}".format(e), file=sys.stderr)
            return EXIT_USAGE
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else EXIT_USAGE

        def handler(signum, frame):
            raise SystemExit("Signal({}) received: the program will be closed"
                             .format(signum))
        previous = {}
        for signum in (signal.SIGINT, signal.SIGTERM):
            try:
                previous[signum] = signal.signal(signum, handler)
            except ValueError:
                pass

        self = cls()
        self._command_name = command
        self._command = cls._commands[command]
        self._command_args = command_args
        self._config = common_args
        self._context = ImmutableMap(command_args)
        self._logger = None
        try:
            self._preprocess()
            code = self._process()
            self._postprocess()
            return EXIT_OK if code is None else code
        except ConfigError as e:
            self._error("configuration error - {}".format(e))
            return EXIT_USAGE
        except NumericalError as e:
            self._error("numerical failure - {}".format(e))
            return EXIT_FAILURE
        except FbtreeError as e:
            self._error(str(e), exc_info=cls.debug)
            return EXIT_FAILURE
        except SystemExit as e:
            self._error(str(e))
            return EXIT_FAILURE
        finally:
            if self._logger is not None:
                self._logger.finalize()
            for signum, func in previous.items():
                signal.signal(signum, func)

    def _preprocess(self):
        pass

    def _error(self, message, **kwargs):
        if self._logger is not None:
            self._logger.error(message, **kwargs)
        else:
            print("error: {}".format(message), file=sys.stderr)

    def _process(self):
        logger.debug("App._process(self) called - command: {}, args: {}"
                     .format(self._command_name, self._command_args))
        return self._command(**self._command_args)

    def _postprocess(self):
        pass

    @property
    def context(self):
        return self._context


class App(AppBase):
    """Command-line application with logging options and config files."""
    app_name = 'fbtree'
    _argparser = argparse.ConfigArgParser(
        prog='fbtree', description="Tree-based FBSDE solver")
    _commands = {}
    _configured = False
    verbose = True

    @classmethod
    def configure(cls, **kwargs):
        if cls._configured:
            return
        cls.add_arg('debug', arg(
            '--debug', action='store_true',
            default=kwargs.get('debug', False),
            help='Enable debug mode'))
        cls.add_arg('logdir', arg(
            '--logdir', metavar='DIR', type=str,
            default=kwargs.get('logdir', None),
            help='Also write a dated log file into this directory'))
        cls.add_arg('loglevel', arg(
            '--loglevel', type=str, choices=logging.LEVEL_CHOICES,
            default=kwargs.get('loglevel', 'info'),
            help='Log level'))
        cls.add_arg('quiet', arg(
            '--quiet', action='store_true',
            default=kwargs.get('quiet', not App.verbose),
            help='Do not print log messages'))
        cls._configured = True

    @classmethod
    def _parse_args(cls, args=None, command=None):
        return cls._argparser.parse(args, command=command)

    def _preprocess(self):
        App.verbose = not self._config['quiet']
        App.debug = self._config['debug']
        loglevel = logging.parse_level(self._config['loglevel'])
        if App.debug and loglevel > logging.DEBUG:
            loglevel = logging.DEBUG
        logdir = self._config['logdir']
        logging.AppLogger.configure(
            level=loglevel,
            verbosity=loglevel if App.verbose else logging.DISABLE,
            filelog=logdir is not None,
            logdir=logdir)
        logger = logging.AppLogger(self.app_name)
        logging.install(logger)
        logger.v(str(sys.version_info))
        logger.v("version: {}".format(fbtree.__version__))
        logger.v("command: {}, config: {}".format(self._command_name,
                                                  self._config))
        logger.i("*** [START] {} ***".format(self._command_name))
        self._logger = logger

    def _postprocess(self):
        self._logger.i("*** [DONE] ***")

    @staticmethod
    def threads():
        """Worker cap from the ``FBSDE_THREADS`` environment variable."""
        value = os.environ.get('FBSDE_THREADS', '1')
        try:
            n = int(value)
        except ValueError:
            raise ConfigError('FBSDE_THREADS',
                              "expected an int: {!r}".format(value))
        if n < 1:
            raise ConfigError('FBSDE_THREADS',
                              "must be positive: {}".format(n))
        return n
