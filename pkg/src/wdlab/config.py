"""Plain-text run configuration for the command line front end.

Files are line based: `key = value`, `#` starts a comment, blank lines are
ignored.  List values are comma separated.  Unknown keys and out-of-range
values are rejected with errors that name the offending key.
"""

from dataclasses import dataclass, field, fields

from .errors import ParseError, UnknownKey, ValidationError

EQUATIONS = ("bfamily", "novikov", "ch_weak")
MKINDS = ("helmholtz", "neglaplacian", "muhelmholtz")
PRESETS = ("smooth", "constant", "zero", "series")


@dataclass
class RunConfig:
    equation: str = "bfamily"
    mkind: str = "helmholtz"
    b: float = 2.0
    kappa: int = 1
    lam: float = 0.0
    n: int = 256
    L: float = 1.0
    dt: float = 1e-3
    t_end: float = 1.0
    snapshot_times: list = field(default_factory=list)
    check_times: list = field(default_factory=list)
    t_check: float = 0.5
    resolutions: list = field(default_factory=lambda: [64, 128, 256])
    blowup_threshold: float = 1e6
    slope_level: float = 60.0
    tolerance: float = 1e-7
    direction: str = "forward"
    v0_preset: str = "smooth"
    v0_constant: float = 0.0
    v0_mean: float = 0.0
    v0_cos: list = field(default_factory=list)
    v0_sin: list = field(default_factory=list)
    sigma0_preset: str = "zero"
    sigma0_constant: float = 0.0
    sigma0_mean: float = 0.0
    sigma0_cos: list = field(default_factory=list)
    sigma0_sin: list = field(default_factory=list)
    output_dir: str = "."
    seed: int = 0

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d):
        cfg = cls()
        for key, value in d.items():
            _assign(cfg, key, value)
        cfg.validate()
        return cfg

    def validate(self):
        def check(cond, key, msg):
            if not cond:
                raise ValidationError(f"{key}: {msg} (got {getattr(self, key)!r})")

        check(self.equation in EQUATIONS, "equation", f"must be one of {EQUATIONS}")
        check(self.mkind in MKINDS, "mkind", f"must be one of {MKINDS}")
        check(self.kappa in (1, -1), "kappa", "must be +1 or -1")
        check(self.lam >= 0, "lam", "must be >= 0")
        check(self.n >= 16 and self.n % 2 == 0, "n", "must be an even integer >= 16")
        check(self.L > 0, "L", "must be positive")
        check(self.dt > 0, "dt", "must be positive")
        check(self.t_end > 0, "t_end", "must be positive")
        check(self.t_check > 0, "t_check", "must be positive")
        check(self.blowup_threshold > 0, "blowup_threshold", "must be positive")
        check(self.slope_level > 0, "slope_level", "must be positive")
        check(self.tolerance > 0, "tolerance", "must be positive")
        check(self.direction in ("forward", "reverse"), "direction",
              "must be forward or reverse")
        check(self.v0_preset in PRESETS, "v0_preset", f"must be one of {PRESETS}")
        check(self.sigma0_preset in PRESETS, "sigma0_preset",
              f"must be one of {PRESETS}")
        check(self.seed >= 0, "seed", "must be a nonnegative integer")
        for key in ("snapshot_times", "check_times"):
            check(all(t > 0 for t in getattr(self, key)), key,
                  "entries must be positive")
        check(len(self.resolutions) >= 2, "resolutions", "need at least two")
        check(all(m >= 16 and int(m) % 2 == 0 for m in self.resolutions),
              "resolutions", "entries must be even integers >= 16")
        return self


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_LIST_FLOAT = ("snapshot_times", "check_times", "v0_cos", "v0_sin",
               "sigma0_cos", "sigma0_sin")
_LIST_INT = ("resolutions",)
# accepted spelling in files differs from the attribute for one key
_ALIASES = {"lambda": "lam"}


def _parse_scalar(key, text):
    typ = _TYPES[key]
    try:
        if typ is int:
            return int(text)
        if typ is float:
            return float(text)
        return text
    except ValueError:
        raise ParseError(
            f"{key}: cannot parse {text!r} as {typ.__name__}"
        ) from None


def _parse_value(key, text):
    if key in _LIST_FLOAT or key in _LIST_INT:
        items = [p.strip() for p in text.split(",") if p.strip()]
        cast = int if key in _LIST_INT else float
        try:
            return [cast(p) for p in items]
        except ValueError:
            raise ParseError(f"{key}: cannot parse list {text!r}") from None
    return _parse_scalar(key, text)


def _assign(cfg, key, value):
    key = _ALIASES.get(key, key)
    if key not in _TYPES:
        raise UnknownKey(f"unknown configuration key {key!r}")
    setattr(cfg, key, value)


def parse_config(text):
    """Parse configuration text into a validated RunConfig."""
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        attr = _ALIASES.get(key, key)
        if attr not in _TYPES:
            raise UnknownKey(f"line {lineno}: unknown configuration key {key!r}")
        setattr(cfg, attr, _parse_value(attr, value))
    cfg.validate()
    return cfg
