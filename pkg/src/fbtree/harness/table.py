import pandas as pd

from fbtree.errors import InvalidArgumentError


COLUMNS = ['N_T', 'M', 'mean_err_y', 'std_y', 'mean_err_z', 'std_z',
           'runtime_s']
FORMATS = ('csv', 'markdown')


def _sci(value):
    return '' if value is None else '%.4e' % value


def _fixed(value):
    return '' if value is None else '%.2f' % value


def to_frame(stats, timings=True):
    """Formatted result rows followed by the convergence-rate row."""
    rows = []
    for cell in stats.cells:
        rows.append([str(cell.n_steps), str(cell.M),
                     _sci(cell.mean_err_y), _sci(cell.std_y),
                     _sci(cell.mean_err_z), _sci(cell.std_z),
                     _fixed(cell.runtime_s) if timings else ''])
    rows.append(['CR', '', _fixed(stats.cr_y), '', _fixed(stats.cr_z), '', ''])
    return pd.DataFrame(rows, columns=COLUMNS)


def _markdown(frame):
    lines = ["| " + " | ".join(frame.columns) + " |",
             "|" + "|".join("---" for _ in frame.columns) + "|"]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def emit_table(stats, format='csv', timings=True):
    if format not in FORMATS:
        raise InvalidArgumentError(
            "format must be one of {}: {!r}".format(FORMATS, format))
    frame = to_frame(stats, timings)
    if format == 'csv':
        return frame.to_csv(index=False, lineterminator='\n')
    return _markdown(frame)
