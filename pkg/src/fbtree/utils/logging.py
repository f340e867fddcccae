from enum import Enum
import datetime
import logging
import os
import sys
import time
import uuid


DISABLE = sys.maxsize
CRITICAL = logging.CRITICAL
FATAL = logging.FATAL
ERROR = logging.ERROR
WARNING = logging.WARNING
WARN = logging.WARN
INFO = logging.INFO
DEBUG = logging.DEBUG
TRACE = 5
NOTSET = logging.NOTSET

for _level, _name in ((DISABLE, 'disabled'), (CRITICAL, 'critical'),
                      (ERROR, 'error'), (WARNING, 'warn'), (INFO, 'info'),
                      (DEBUG, 'debug'), (TRACE, 'trace'), (NOTSET, 'none')):
    logging.addLevelName(_level, _name)

LEVEL_CHOICES = ['fatal', 'error', 'warn', 'info', 'debug', 'trace']

APP_FORMAT = "%(asctime)-15s\t%(runid)s\t[%(levelname)s]\t%(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S.%f"


def _format_time(format, t, usecs=0, precision=6):
    if '%f' in format:
        if precision < 6:
            usecs = int(usecs * (0.1 ** (6 - precision)))
        format = format.replace(
            '%f', '{:0{prec}d}'.format(usecs, prec=precision))
    return time.strftime(format, t)


def parse_level(name):
    if isinstance(name, int):
        return name
    name = name.lower()
    if name == 'fatal':
        return FATAL
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError("unknown log level: {}".format(name))
    return level


class Formatter(logging.Formatter):

    def formatTime(self, record, datefmt=None):
        ct = self.converter(record.created)
        if datefmt:
            return _format_time(datefmt, ct, int(record.msecs * 1000), 3)
        t = time.strftime(self.default_time_format, ct)
        return self.default_msec_format % (t, record.msecs)


class Color(int, Enum):
    RED = 1
    GREEN = 2
    YELLOW = 3
    CYAN = 6
    WHITE = 7


class ColoredFormatter(Formatter):
    RESET_SEQ = "\033[0m"
    COLOR_SEQ = "\033[%dm"
    COLORS = {
        CRITICAL: Color.RED,
        ERROR: Color.RED,
        WARNING: Color.YELLOW,
        INFO: Color.WHITE,
        DEBUG: Color.CYAN,
        TRACE: Color.CYAN,
    }

    def format(self, record):
        s = super().format(record)
        color = self.COLORS.get(record.levelno)
        if color is not None:
            s = (self.COLOR_SEQ % (30 + color)) + s + self.RESET_SEQ
        return s


class Logger(logging.Logger):

    def trace(self, msg, *args, **kwargs):
        if self.isEnabledFor(TRACE):
            self._log(TRACE, msg, args, **kwargs)

    e = logging.Logger.error
    w = logging.Logger.warning
    i = logging.Logger.info
    d = logging.Logger.debug
    v = trace

    def finalize(self):
        for hdlr in list(self.handlers):
            hdlr.close()
            self.removeHandler(hdlr)


class AppLogger(Logger):
    """Logger of a command-line run.

    Every record carries a short run id so that interleaved log files of
    concurrent batch runs can be told apart.
    """
    _config = {
        'level': INFO,
        'verbosity': TRACE,
        'filelog': False,
        'logdir': None,
        'filename': "%Y%m%d.log",
        'filemode': 'a',
        'fmt': APP_FORMAT,
        'datefmt': DATE_FORMAT,
        'stream': None,
    }

    @classmethod
    def configure(cls, **kwargs):
        cls._config = dict(cls._config, **kwargs)

    def __init__(self, name, level=NOTSET):
        super().__init__(name, level)
        config = AppLogger._config
        now = time.time()
        self._runid = uuid.uuid4().hex[:6]
        self._started = now
        self.setLevel(min(config['level'], config['verbosity']))
        if config['filelog'] and config['logdir']:
            self._add_file_handler(config)
        stream_handler = logging.StreamHandler(config['stream'])
        stream_handler.setLevel(config['verbosity'])
        stream_handler.setFormatter(
            ColoredFormatter(config['fmt'], config['datefmt']))
        stream_handler.addFilter(self._make_filter())
        self.addHandler(stream_handler)
        self.debug("LOG Start with RUNID=[%s] STARTTIME=[%s]",
                   self._runid, self.starttime.isoformat())

    def _add_file_handler(self, config):
        if config['filemode'] not in ('a', 'w'):
            raise ValueError("Invalid filemode specified: {}"
                             .format(config['filemode']))
        logdir = os.path.abspath(os.path.expanduser(config['logdir']))
        if not os.path.isdir(logdir):
            raise FileNotFoundError("logdir was not found: `%s`" % logdir)
        basename = _format_time(config['filename'],
                                time.localtime(self._started))
        file_handler = logging.FileHandler(
            os.path.join(logdir, basename), mode=config['filemode'])
        file_handler.setLevel(config['level'])
        file_handler.setFormatter(Formatter(config['fmt'], config['datefmt']))
        file_handler.addFilter(self._make_filter())
        self.addHandler(file_handler)

    def _make_filter(self):
        def _filter(record):
            record.runid = self._runid
            return True
        return _filter

    def finalize(self):
        self.debug("LOG End with RUNID=[%s] PROCESSTIME=[%3.6f]",
                   self._runid, time.time() - self._started)
        super().finalize()

    @property
    def runid(self):
        return self._runid

    @property
    def starttime(self):
        return datetime.datetime.fromtimestamp(self._started)


def getLogger(name=None):
    return logging.getLogger(name)


def install(logger):
    """Routes the records of the ``fbtree`` package to ``logger``."""
    package = logging.getLogger(__name__.split('.')[0])
    package.handlers = [h for h in package.handlers
                        if isinstance(h, logging.NullHandler)]
    for hdlr in logger.handlers:
        package.addHandler(hdlr)
    package.setLevel(logger.level)
    package.propagate = False
    return package


logging.setLoggerClass(Logger)
logging.getLogger(__name__.split('.')[0]).addHandler(logging.NullHandler())
