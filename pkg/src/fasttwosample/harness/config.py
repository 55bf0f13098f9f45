"""Experiment configuration files.

The format is flat ``key = value`` text; ``#`` starts a comment. Global keys
describe the data and the sweep, and each ``test.method`` line opens a new
test block that the following ``test.*`` keys belong to::

    generator = dataset_one      # dataset_one | dataset_two | blobs | csv-pair
    D = 5
    n = 1000
    sweep = n                    # n | D | noise
    values = 250, 1000, 4000
    replications = 100
    alpha = 0.05
    seed = 7

    test.method = me             # me | scf | cf | mmd | block | sub
    test.J = 3
    test.gamma = tune            # a positive number or "tune"

    test.method = block
    test.B = 3
    test.gamma = 2.0

Other global keys: ``noise`` (Gaussian noise sigma added to both samples),
``workers``, ``benchmark`` (forces one worker), ``mmd_cap``, ``tune.grid``
(``lo:hi:step`` in log2 units), ``tune.reps``, ``tune.n``, ``blobs.grid``,
``blobs.spacing``, ``blobs.stretch``, ``blobs.angle``, ``csv.x``, ``csv.y``,
``csv.train_fraction``. Relative CSV paths are resolved against the
directory of the config file.
"""

from dataclasses import dataclass, field
from pathlib import Path

from ..datagen import BlobsSpec
from ..errors import DomainError

GENERATORS = ("dataset_one", "dataset_two", "blobs", "csv-pair")
SWEEPS = ("n", "D", "noise")
METHODS = ("me", "scf", "cf", "mmd", "block", "sub")
METHOD_LABELS = {"me": "ME", "scf": "SCF", "cf": "CF", "mmd": "MMD(n)", "block": "BlockMMD", "sub": "MMD(sqrt n)"}


@dataclass
class TestEntry:
    __test__ = False

    method: str
    J: int = 5
    B: int = 5
    permutations: int = 250
    gamma: object = 1.0  # float or "tune"
    name: str = ""

    def label(self):
        if self.name:
            return self.name
        base = METHOD_LABELS[self.method]
        if self.method in ("me", "scf", "cf"):
            return f"{base}(J={self.J})"
        if self.method == "block":
            return f"{base}(B={self.B})"
        return base


@dataclass
class ExperimentConfig:
    generator: str = "dataset_one"
    n: int = 1000
    D: int = 2
    noise: float = 0.0
    sweep: str = "n"
    values: list = field(default_factory=list)
    tests: list = field(default_factory=list)
    replications: int = 100
    alpha: float = 0.05
    seed: int = 0
    workers: int = 1
    benchmark: bool = False
    mmd_cap: int = 6000
    tune_grid: str = "-10:10:1"
    tune_reps: int = 25
    tune_n: int = 0  # 0: use the row's sample size
    blobs: BlobsSpec = field(default_factory=BlobsSpec)
    csv_x: str = ""
    csv_y: str = ""
    csv_train_fraction: float = 0.5

    def validate(self):
        if self.generator not in GENERATORS:
            raise DomainError(f"unknown generator {self.generator!r}; expected one of {', '.join(GENERATORS)}")
        if self.sweep not in SWEEPS:
            raise DomainError(f"unknown sweep variable {self.sweep!r}; expected one of {', '.join(SWEEPS)}")
        if not self.values:
            raise DomainError("sweep value list is empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise DomainError("sweep values must be strictly increasing")
        if self.generator in ("blobs", "csv-pair") and self.sweep == "D":
            raise DomainError(f"generator {self.generator} has a fixed dimension; cannot sweep D")
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if not 0 < self.alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")
        if not self.tests:
            raise DomainError("no test blocks configured")
        if self.generator == "csv-pair" and not (self.csv_x and self.csv_y):
            raise DomainError("csv-pair generator needs csv.x and csv.y")
        for t in self.tests:
            if t.method not in METHODS:
                raise DomainError(f"unknown test method {t.method!r}; expected one of {', '.join(METHODS)}")
            if t.gamma != "tune" and not t.gamma > 0:
                raise DomainError(f"test {t.label()}: gamma must be positive or 'tune'")
        return self


def _parse_value(key, text, kind):
    try:
        if kind is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError:
        raise DomainError(f"bad value for {key}: {text!r}") from None


def _parse_gamma(text):
    if text.strip().lower() == "tune":
        return "tune"
    return _parse_value("gamma", text, float)


_GLOBAL_KEYS = {
    "generator": ("generator", str),
    "n": ("n", int),
    "d": ("D", int),
    "noise": ("noise", float),
    "sweep": ("sweep", str),
    "replications": ("replications", int),
    "alpha": ("alpha", float),
    "seed": ("seed", int),
    "workers": ("workers", int),
    "benchmark": ("benchmark", bool),
    "mmd_cap": ("mmd_cap", int),
    "tune.grid": ("tune_grid", str),
    "tune.reps": ("tune_reps", int),
    "tune.n": ("tune_n", int),
    "csv.x": ("csv_x", str),
    "csv.y": ("csv_y", str),
    "csv.train_fraction": ("csv_train_fraction", float),
}

_BLOBS_KEYS = {"grid": int, "spacing": float, "stretch": float, "angle": float}
_TEST_KEYS = {"j": ("J", int), "b": ("B", int), "permutations": ("permutations", int), "name": ("name", str)}


def parse_config(text, base_dir=None):
    cfg = ExperimentConfig()
    blobs_args = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        lkey = key.lower()
        if lkey == "test.method":
            current = TestEntry(method=value.lower())
            cfg.tests.append(current)
        elif lkey.startswith("test."):
            if current is None:
                raise DomainError(f"config line {lineno}: {key} before any test.method")
            sub = lkey[len("test."):]
            if sub == "gamma":
                current.gamma = _parse_gamma(value)
            elif sub in _TEST_KEYS:
                attr, kind = _TEST_KEYS[sub]
                setattr(current, attr, _parse_value(key, value, kind))
            else:
                raise DomainError(f"config line {lineno}: unknown test key {key!r}")
        elif lkey.startswith("blobs."):
            sub = lkey[len("blobs."):]
            if sub not in _BLOBS_KEYS:
                raise DomainError(f"config line {lineno}: unknown blobs key {key!r}")
            blobs_args[sub] = _parse_value(key, value, _BLOBS_KEYS[sub])
        elif lkey == "values":
            cfg.values = [_parse_value(key, v.strip(), float) for v in value.split(",") if v.strip()]
        elif lkey in _GLOBAL_KEYS:
            attr, kind = _GLOBAL_KEYS[lkey]
            setattr(cfg, attr, _parse_value(key, value, kind))
        else:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
    if blobs_args:
        cfg.blobs = BlobsSpec(**blobs_args)
    # `values` may precede `sweep`; coerce once both are known
    if cfg.sweep in ("n", "D"):
        if any(v != int(v) for v in cfg.values):
            raise DomainError(f"sweep over {cfg.sweep} needs integer values")
        cfg.values = [int(v) for v in cfg.values]
    if base_dir is not None:
        for attr in ("csv_x", "csv_y"):
            p = getattr(cfg, attr)
            if p and not Path(p).is_absolute():
                setattr(cfg, attr, str(Path(base_dir) / p))
    return cfg.validate()


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)
