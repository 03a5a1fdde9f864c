"""
Training-curve data: (step, series, value) points, CSV output and a static PNG plot.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from matplotlib.figure import Figure

from core.error_handling.exceptions import FileSystemError

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ('step', 'series', 'value')
LOG_SERIES = ('mlm_loss', 'penalty', 'total_loss', 'cross_lingual_l2')


@dataclass(frozen=True)
class CurvePoint:
    step: int
    series: str
    value: float


class CurveRecorder:
    """곡선 점을 추가 순서대로 모읍니다."""

    def __init__(self, points: Iterable[CurvePoint] = ()):
        self._points: List[CurvePoint] = list(points)

    def add(self, step: int, series: str, value: float) -> CurvePoint:
        point = CurvePoint(int(step), str(series), float(value))
        self._points.append(point)
        return point

    def extend_from_log(self, log, names: Sequence[str] = LOG_SERIES, prefix: str = '') -> None:
        """Copy TrainLog columns in as series ``{prefix}{name}``."""
        for name in names:
            for step, value in log.series(name):
                self.add(step, f"{prefix}{name}", value)

    @classmethod
    def from_train_log(cls, log, names: Sequence[str] = LOG_SERIES, prefix: str = '') -> 'CurveRecorder':
        recorder = cls()
        recorder.extend_from_log(log, names, prefix)
        return recorder

    @property
    def points(self) -> List[CurvePoint]:
        return list(self._points)

    def __len__(self):
        return len(self._points)

    def series_names(self) -> List[str]:
        return list(dict.fromkeys(p.series for p in self._points))

    def series(self, name: str) -> List[Tuple[int, float]]:
        return [(p.step, p.value) for p in self._points if p.series == name]

    def as_dict(self) -> Dict[str, List[Tuple[int, float]]]:
        return {name: self.series(name) for name in self.series_names()}

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CURVE_COLUMNS)
        for p in self._points:
            writer.writerow([p.step, p.series, repr(p.value)])
        return buffer.getvalue()

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(self.to_csv())
        except OSError as e:
            raise FileSystemError(f"Cannot write {path}", file_path=path, operation='write') from e
        return path

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> 'CurveRecorder':
        recorder = cls()
        with open(path, 'r', encoding='utf-8', newline='') as f:
            for row in csv.DictReader(f):
                recorder.add(int(row['step']), row['series'], float(row['value']))
        return recorder


def plot_curves(
    recorder: CurveRecorder,
    path: Union[str, Path],
    series: Optional[Sequence[str]] = None,
    title: str = '',
    ylabel: str = '',
) -> Path:
    """Render one line per series into a PNG."""
    path = Path(path)
    names = list(series) if series else recorder.series_names()

    figure = Figure(figsize=(7, 4.5), dpi=100)
    axes = figure.add_subplot(1, 1, 1)
    for name in names:
        points = recorder.series(name)
        if points:
            steps, values = zip(*points)
            axes.plot(steps, values, label=name, linewidth=1.2)
    axes.set_xlabel('step')
    if ylabel:
        axes.set_ylabel(ylabel)
    if title:
        axes.set_title(title)
    if names:
        axes.legend(fontsize='small')
    axes.grid(True, alpha=0.3)
    figure.tight_layout()

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        figure.savefig(path, format='png', metadata={'Software': None})
    except OSError as e:
        raise FileSystemError(f"Cannot write {path}", file_path=path, operation='write') from e
    logger.info(f"Plot written: {path}", extra={'series': len(names)})
    return path


def last_quartile_slope(values: Sequence[float]) -> float:
    """
    곡선 마지막 4분의 1 구간에서 인접한 점 사이 변화량의 최댓값을 곡선 최댓값 대비 비율로 돌려줍니다.

    0.05보다 작으면 수렴한 것으로 봅니다.
    """
    values = list(values)
    if len(values) < 2:
        return 0.0
    tail = values[-max(2, math.ceil(len(values) / 4)):]
    peak = max(abs(v) for v in values)
    if peak == 0:
        return 0.0
    return max(abs(b - a) for a, b in zip(tail, tail[1:])) / peak
