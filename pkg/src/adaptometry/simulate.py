"""Deterministic synthetic enterprise (timber harvesting and deep processing).

The generator lays out ``n_parameters`` columns across the ten business-plan
blocks (environment plus nine enterprise blocks) and drives each column from
a small set of shared schedules: the environment timeline, harvesting and
processing volumes, asset purchases, the loan schedule and the staffing plan.
Magnitudes are arbitrary positive constants; what is meant to be faithful is
the structure: sale-start gating, river-navigation seasonality, the sanctions
shock window and the seasonal-inflation windows.

Randomness
----------
Every column draws from its own substream so that the output does not depend
on generation order.  A substream is ``PCG64(SeedSequence([seed, stream]))``
(numpy's documented PCG64 and SeedSequence algorithms); standard normals are
produced from its raw 64-bit outputs by Box-Muller::

    u = ((raw >> 11) + 0.5) * 2**-53           # in (0, 1)
    z = sqrt(-2 ln u1) * cos(2 pi u2)           # one normal per pair

Column ``c`` (0-based) uses stream ``c``; the environment and the sanctions
shock use the reserved streams below.
"""
from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .panel import Block, ParameterMeta, TimeSeriesPanel

# reserved substreams
_ENV_STREAM = 1 << 32
_SHOCK_STREAM = (1 << 32) + 1
_U64 = (1 << 64) - 1

SANCTIONS_WINDOW = (32, 38)
SEASONAL_WINDOWS = ((43, 50), (56, 62))
SEASONAL_WEIGHTS = (1.0, 2.5)  # seasonal inflation accelerates: the second episode is stronger
NAVIGATION_MONTHS = frozenset({5, 6, 7, 8, 9})  # May..September
BASE_SAWLOG_START = 5  # earliest sawlog sale month (no export ban)

PROJECT_COST = 40_000_000.0
LEGAL_SUBSIDY_PER_MONTH = 60_000.0
BASE_LOGGING_VOLUME = 800.0  # thousand m3 / year
GRACE_MONTHS = 36  # interest-only period of the project credit
REPAY_MONTHS = 84
BASE_MONTHLY_INFLATION = 0.004
ASSET_PURCHASE_SPAN = 12  # months over which fixed assets are bought
ASSET_LIVES = (60, 72, 84, 96, 120)
FULL_CAPACITY_MONTH = 37  # plan month by which the processing line reaches design capacity
MIN_RAMP_MONTHS = 6
EXPORT_BAN_PRICE_FACTOR = 0.8

# Column allocation across blocks, in Block order 0..9.
BLOCK_RATIOS = (0.08, 0.06, 0.16, 0.06, 0.12, 0.10, 0.08, 0.18, 0.06, 0.10)

BLOCK_NAMES = {
    Block.ENVIRONMENT: "external environment",
    Block.INVESTMENT: "investment plan",
    Block.EQUIPMENT: "equipment, machines and mechanisms",
    Block.DEPRECIATION: "depreciation",
    Block.PRODUCTS: "products",
    Block.LOGISTICS: "warehouse balances and logistics",
    Block.STAFFING: "staffing",
    Block.FINANCE: "budget and finance",
    Block.ECOLOGY: "environmentally friendly production",
    Block.ENGINEERING: "engineering",
}

ENV_FIELDS = ("exchange_rate", "tax_rate", "fuel_price", "electricity_tariff", "inflation_rate",
              "raw_material_price", "product_price", "equipment_price", "productivity")
# (base level, price-level elasticity)
_ENV_BASE = {
    "exchange_rate": (75.0, 0.6),
    "tax_rate": (0.20, 0.0),
    "fuel_price": (50.0, 1.2),
    "electricity_tariff": (4.0, 1.0),
    "inflation_rate": (None, None),
    "raw_material_price": (1_500.0, 1.0),
    "product_price": (9_000.0, 0.9),
    "equipment_price": (100.0, 1.1),
    "productivity": (1.0, 0.0),
}
_ENV_NOISE = 0.01

PRODUCTS = ("round timber", "calibrated timber", "glued board", "euro lining", "floor boards",
            "veneer", "furniture", "pellets")


@dataclass(frozen=True)
class ControlOption:
    id: int
    credit_share: float  # % of project cost
    rate: float  # annual % on credit
    owner_share: float  # % of project cost
    subsidy_share: float  # % of legally required subsidies
    sawlog_sale_start: int  # month
    products_sale_start: int  # month
    asset_offset_months: int = 0
    logging_volume: float = BASE_LOGGING_VOLUME  # thousand m3 / year

    def __post_init__(self):
        for name in ("credit_share", "rate", "owner_share", "subsidy_share", "logging_volume"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        for name in ("sawlog_sale_start", "products_sale_start"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.asset_offset_months < 0:
            raise ConfigError(f"asset_offset_months must be >= 0, got {self.asset_offset_months}")

    @property
    def sanctions(self) -> bool:
        """Sanctions on imported equipment are what delays the asset purchases."""
        return self.asset_offset_months > 0

    @property
    def export_ban(self) -> bool:
        return self.sawlog_sale_start > BASE_SAWLOG_START


def builtin_options() -> list[ControlOption]:
    """The six control options, in order."""
    return [
        ControlOption(1, 100, 10, 0, 33, 5, 21, 0, 800),
        ControlOption(2, 63, 10, 37, 100, 10, 21, 0, 800),
        ControlOption(3, 63, 10, 37, 100, 10, 21, 5, 800),
        ControlOption(4, 126, 13, 0, 100, 10, 27, 5, 800),
        ControlOption(5, 112, 13, 0, 100, 10, 27, 5, 800),
        ControlOption(6, 112, 13, 0, 100, 10, 27, 5, 1000),
    ]


def get_option(option_id: int) -> ControlOption:
    for opt in builtin_options():
        if opt.id == option_id:
            return opt
    raise ConfigError(f"option id must be 1..6, got {option_id}")


@dataclass(frozen=True)
class SimConfig:
    n_parameters: int = 200
    horizon_T: int = 62
    seed: int = 0
    noise_scale: float = 0.05
    shock_amplitude: float = 1.5  # multiplier on affected columns during sanctions
    seasonal_amplitude: float = 1.0  # seasonal price surcharge, in units of noise_scale

    def __post_init__(self):
        if self.n_parameters < 20:
            raise ConfigError(f"n_parameters must be >= 20, got {self.n_parameters}")
        if self.horizon_T < 1:
            raise ConfigError(f"horizon_T must be >= 1, got {self.horizon_T}")
        if self.noise_scale < 0:
            raise ConfigError(f"noise_scale must be >= 0, got {self.noise_scale}")
        if self.shock_amplitude <= 0:
            raise ConfigError(f"shock_amplitude must be > 0, got {self.shock_amplitude}")
        if self.seasonal_amplitude < 0:
            raise ConfigError(f"seasonal_amplitude must be >= 0, got {self.seasonal_amplitude}")

    def validate_for(self, option: ControlOption) -> None:
        if self.horizon_T < option.products_sale_start:
            raise ConfigError(
                f"horizon < products_sale_start ({option.products_sale_start}): horizon_T={self.horizon_T}")


# ---------------------------------------------------------------------------
# Random streams


def normals(seed: int, stream: int, size: int) -> np.ndarray:
    """``size`` standard normals from substream ``stream`` (Box-Muller on PCG64)."""
    bitgen = np.random.PCG64(np.random.SeedSequence([int(seed) & _U64, int(stream)]))
    raw = bitgen.random_raw(2 * size)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    u1, u2 = u[0::2], u[1::2]
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


# ---------------------------------------------------------------------------
# Environment


def month_of_year(t) -> np.ndarray:
    """Tick 1 is January; tick 12 is December."""
    m = np.asarray(t) % 12
    return np.where(m == 0, 12, m)


def _in_windows(t: np.ndarray, windows) -> np.ndarray:
    out = np.zeros(t.shape, dtype=bool)
    for lo, hi in windows:
        out |= (t >= lo) & (t <= hi)
    return out


@dataclass(frozen=True)
class EnvironmentTimeline:
    ticks: np.ndarray
    exchange_rate: np.ndarray
    tax_rate: np.ndarray
    fuel_price: np.ndarray
    electricity_tariff: np.ndarray
    inflation_rate: np.ndarray  # monthly
    raw_material_price: np.ndarray
    product_price: np.ndarray
    equipment_price: np.ndarray
    productivity: np.ndarray
    price_level: np.ndarray
    sanctions_active: np.ndarray
    export_ban_active: np.ndarray
    river_navigation_open: np.ndarray
    seasonal_active: np.ndarray

    def series(self, name: str) -> np.ndarray:
        return getattr(self, name)


def environment_timeline(option: ControlOption, config: SimConfig) -> EnvironmentTimeline:
    t = np.arange(1, config.horizon_T + 1)
    seasonal = _in_windows(t, SEASONAL_WINDOWS)
    z = normals(config.seed, _ENV_STREAM, len(ENV_FIELDS) * t.size).reshape(len(ENV_FIELDS), t.size)
    inflation = BASE_MONTHLY_INFLATION * np.exp(_ENV_NOISE * 10 * z[ENV_FIELDS.index("inflation_rate")])
    price_level = np.cumprod(1.0 + inflation)
    env = {"inflation_rate": inflation}
    for f, name in enumerate(ENV_FIELDS):
        base, elasticity = _ENV_BASE[name]
        if base is None:
            continue
        env[name] = base * price_level ** elasticity * np.exp(_ENV_NOISE * z[f])
    sanctions = _in_windows(t, [SANCTIONS_WINDOW]) if option.sanctions else np.zeros(t.size, bool)
    export_ban = np.full(t.size, option.export_ban)
    nav = np.isin(month_of_year(t), list(NAVIGATION_MONTHS))
    return EnvironmentTimeline(ticks=t, price_level=price_level, sanctions_active=sanctions,
                               export_ban_active=export_ban, river_navigation_open=nav,
                               seasonal_active=seasonal, **env)


# ---------------------------------------------------------------------------
# Block layout


def allocate_columns(n_parameters: int) -> dict[Block, int]:
    """Largest-remainder split of ``n_parameters`` by ``BLOCK_RATIOS``."""
    exact = [r * n_parameters for r in BLOCK_RATIOS]
    counts = [int(math.floor(x)) for x in exact]
    short = n_parameters - sum(counts)
    order = sorted(range(len(exact)), key=lambda b: (-(exact[b] - counts[b]), b))
    for b in order[:short]:
        counts[b] += 1
    return {Block(b): c for b, c in enumerate(counts)}


def describe_blocks(n_parameters: int = 200) -> list[dict]:
    """Catalog of the ten blocks with the columns each gets at this width."""
    alloc = allocate_columns(n_parameters)
    return [{"block": int(b), "name": BLOCK_NAMES[b], "columns": alloc[b]} for b in BLOCK_NAMES]


# ---------------------------------------------------------------------------
# Shared schedules


@dataclass(frozen=True)
class _Context:
    t: np.ndarray
    option: ControlOption
    env: EnvironmentTimeline
    asset_start: int
    harvest: np.ndarray  # thousand m3 / month
    processing: np.ndarray  # thousand m3 / month through the deep-processing line
    loan_balance: np.ndarray
    loan_interest: np.ndarray
    loan_principal: np.ndarray


def _step(t: np.ndarray, start: int) -> np.ndarray:
    return (t >= start).astype(np.float64)


def _loan_schedule(option: ControlOption, t: np.ndarray):
    principal0 = option.credit_share / 100.0 * PROJECT_COST
    i = option.rate / 100.0 / 12.0
    if principal0 == 0:
        z = np.zeros(t.size)
        return z, z.copy(), z.copy()
    if i > 0:
        payment = principal0 * i / (1.0 - (1.0 + i) ** -REPAY_MONTHS)
    else:
        payment = principal0 / REPAY_MONTHS
    balance = np.empty(t.size)
    interest = np.empty(t.size)
    repaid = np.empty(t.size)
    b = principal0
    for c, tick in enumerate(t.tolist()):
        interest[c] = b * i
        if tick > GRACE_MONTHS and b > 0:
            p = min(payment - interest[c], b)
        else:
            p = 0.0
        repaid[c] = p
        b -= p
        balance[c] = b
    return balance, interest, repaid


def _context(option: ControlOption, config: SimConfig) -> _Context:
    env = environment_timeline(option, config)
    t = env.ticks
    asset_start = 1 + option.asset_offset_months
    scale = option.logging_volume / 12.0
    harvest_start = min(asset_start + 1, option.sawlog_sale_start)
    # harvesting ramps up over six months once machines are on site
    ramp = np.clip((t - harvest_start + 1) / 6.0, 0.0, 1.0)
    harvest = scale * ramp * env.productivity
    ramp_months = max(MIN_RAMP_MONTHS, FULL_CAPACITY_MONTH - option.products_sale_start)
    commissioning = np.clip((t - option.products_sale_start + 1) / ramp_months, 0.0, 1.0)
    processing = 0.6 * scale * commissioning * env.productivity
    balance, interest, repaid = _loan_schedule(option, t)
    return _Context(t, option, env, asset_start, harvest, processing, balance, interest, repaid)


# ---------------------------------------------------------------------------
# Column archetypes.  Each returns (label, base profile >= 0).


def _environment(ctx: _Context, j: int):
    name = ENV_FIELDS[j % len(ENV_FIELDS)]
    rep = j // len(ENV_FIELDS)
    label = f"env.{name}" + (f".{rep}" if rep else "")
    return label, ctx.env.series(name).copy()


def _investment(ctx: _Context, j: int):
    start = ctx.asset_start + (j % 6)
    span = ASSET_PURCHASE_SPAN + 6 * (j % 3)
    active = (ctx.t >= start) & (ctx.t < start + span)
    weight = 1.0 + 0.25 * (j % 5)
    return f"invest.activity{j + 1}", weight * 50.0 * ctx.env.equipment_price * active


def _equipment(ctx: _Context, j: int):
    kinds = ("fuel", "repair_major", "repair_current", "inspection", "lease", "spares", "office_it")
    kind = kinds[j % len(kinds)]
    on_site = _step(ctx.t, ctx.asset_start)
    usage = 0.4 + ctx.harvest / max(ctx.option.logging_volume / 12.0, 1e-9)
    if kind == "fuel":
        v = 3.0 * ctx.env.fuel_price * usage
    elif kind == "office_it":
        v = 40.0 * ctx.env.equipment_price / 100.0 * np.ones(ctx.t.size)
    else:
        v = (20.0 + 5.0 * (j % 4)) * ctx.env.equipment_price / 100.0 * usage
    return f"equip.{kind}{j // len(kinds) + 1}", v * on_site


def _depreciation(ctx: _Context, j: int):
    purchase = ctx.asset_start + (j % ASSET_PURCHASE_SPAN)
    life = ASSET_LIVES[j % len(ASSET_LIVES)]
    cost = PROJECT_COST * 0.02 * (1.0 + 0.1 * (j % 7))
    accumulated = cost * np.clip((ctx.t - purchase + 1) / life, 0.0, 1.0)
    return f"depr.asset{j + 1}", accumulated


def _products(ctx: _Context, j: int):
    product = PRODUCTS[j % len(PRODUCTS)]
    rep = j // len(PRODUCTS)
    label = f"prod.{product.replace(' ', '_')}" + (f".{rep}" if rep else "")
    if j % len(PRODUCTS) == 0:
        price = ctx.env.raw_material_price * (EXPORT_BAN_PRICE_FACTOR if ctx.option.export_ban else 1.0)
        v = 0.5 * ctx.harvest * price * _step(ctx.t, ctx.option.sawlog_sale_start)
    else:
        share = 1.0 / (len(PRODUCTS) - 1) * (0.7 + 0.1 * (j % 5))
        v = ctx.processing * share * ctx.env.product_price
    return label, v


def _logistics(ctx: _Context, j: int):
    nav = ctx.env.river_navigation_open
    if j % 2 == 0:
        v = (0.8 + 0.1 * (j % 3)) * ctx.option.logging_volume / 5.0 * ctx.env.fuel_price * nav
        return f"logist.barge{j // 2 + 1}", v
    # lower-site receipts for the current navigation year (October to September)
    received = np.zeros(ctx.t.size)
    run = 0.0
    for c, (month, is_open) in enumerate(zip(month_of_year(ctx.t).tolist(), nav.tolist())):
        if month == 10:
            run = 0.0
        if is_open:
            run += 1.0
        received[c] = run
    v = ctx.option.logging_volume / 5.0 * (0.5 + 0.1 * (j % 3)) * received * nav
    return f"logist.received{j // 2 + 1}", v


def _staffing(ctx: _Context, j: int):
    kinds = ("admin", "logging_crew", "processing_staff", "engineers")
    kind = kinds[j % len(kinds)]
    volume = ctx.option.logging_volume / BASE_LOGGING_VOLUME
    wage = ctx.env.price_level
    if kind == "admin":
        v = 30.0 * volume * wage * np.ones(ctx.t.size)
    elif kind == "logging_crew":
        v = 120.0 * volume * wage * (ctx.harvest > 0)
    elif kind == "processing_staff":
        v = 200.0 * volume * wage * _step(ctx.t, ctx.option.products_sale_start - 2)
    else:
        v = 15.0 * volume * wage * _step(ctx.t, ctx.asset_start)
    return f"staff.{kind}{j // len(kinds) + 1}", v


def _revenue(ctx: _Context) -> np.ndarray:
    sawlogs = 0.5 * ctx.harvest * ctx.env.raw_material_price * _step(ctx.t, ctx.option.sawlog_sale_start)
    if ctx.option.export_ban:
        sawlogs = sawlogs * EXPORT_BAN_PRICE_FACTOR
    return sawlogs + ctx.processing * ctx.env.product_price


def _opex(ctx: _Context) -> np.ndarray:
    fixed = 0.004 * PROJECT_COST * ctx.env.price_level * _step(ctx.t, ctx.asset_start)
    return fixed + 0.35 * _revenue(ctx)


def _finance(ctx: _Context, j: int):
    kinds = ("loan_balance", "interest", "principal", "owner_funds", "subsidies", "taxes",
             "revenue_proceeds", "payables", "net_cash_flow")
    kind = kinds[j % len(kinds)]
    o = ctx.option
    if kind == "loan_balance":
        v = ctx.loan_balance
    elif kind == "interest":
        v = ctx.loan_interest
    elif kind == "principal":
        v = ctx.loan_principal
    elif kind == "owner_funds":
        v = o.owner_share / 100.0 * PROJECT_COST / 12.0 * (ctx.t <= 12)
    elif kind == "subsidies":
        v = o.subsidy_share / 100.0 * LEGAL_SUBSIDY_PER_MONTH * _step(ctx.t, ctx.asset_start)
    elif kind == "taxes":
        v = ctx.env.tax_rate * (ctx.harvest * ctx.env.raw_material_price * 0.5
                                + ctx.processing * ctx.env.product_price) + 50.0
    elif kind == "revenue_proceeds":
        v = _revenue(ctx)
    elif kind == "payables":
        v = _opex(ctx)
    else:
        subsidies = o.subsidy_share / 100.0 * LEGAL_SUBSIDY_PER_MONTH * _step(ctx.t, ctx.asset_start)
        v = _revenue(ctx) + subsidies - _opex(ctx) - ctx.loan_interest - ctx.loan_principal
    return f"fin.{kind}{j // len(kinds) + 1}", v


def _ecology(ctx: _Context, j: int):
    if j % 2 == 0:
        return f"eco.emissions{j // 2 + 1}", 2.0 * ctx.processing + 0.5 * ctx.harvest
    return f"eco.waste_to_pellets{j // 2 + 1}", 0.3 * ctx.processing * ctx.env.electricity_tariff


def _engineering(ctx: _Context, j: int):
    if j % 2 == 0:
        active = (ctx.t >= ctx.asset_start) & (ctx.t < ctx.asset_start + ASSET_PURCHASE_SPAN + 6)
        return f"eng.installation{j // 2 + 1}", 80.0 * ctx.env.equipment_price * active
    return f"eng.service{j // 2 + 1}", 10.0 * ctx.env.equipment_price * _step(ctx.t, ctx.option.products_sale_start)


_ARCHETYPES = {
    Block.ENVIRONMENT: _environment,
    Block.INVESTMENT: _investment,
    Block.EQUIPMENT: _equipment,
    Block.DEPRECIATION: _depreciation,
    Block.PRODUCTS: _products,
    Block.LOGISTICS: _logistics,
    Block.STAFFING: _staffing,
    Block.FINANCE: _finance,
    Block.ECOLOGY: _ecology,
    Block.ENGINEERING: _engineering,
}

# engineering is the imported (US-built) processing line, so it sits with equipment
SHOCKED_BLOCKS = frozenset({Block.EQUIPMENT, Block.FINANCE, Block.ENGINEERING})
# blocks whose values are quoted in current prices and therefore carry seasonal inflation
SEASONAL_BLOCKS = frozenset({Block.ENVIRONMENT, Block.EQUIPMENT, Block.PRODUCTS, Block.LOGISTICS,
                             Block.ECOLOGY, Block.ENGINEERING, Block.INVESTMENT})


def latent_factors(option: ControlOption, config: SimConfig, env: EnvironmentTimeline | None = None):
    """Common multiplicative factors (sanctions shock, seasonal inflation) per tick."""
    env = env if env is not None else environment_timeline(option, config)
    size = config.horizon_T
    shock = np.ones(size)
    if option.sanctions:
        lam = normals(config.seed, _SHOCK_STREAM, size)
        shock = np.where(env.sanctions_active, config.shock_amplitude ** (1.0 + 0.5 * lam), 1.0)
    season = np.ones(size)
    for (lo, hi), weight in zip(SEASONAL_WINDOWS, SEASONAL_WEIGHTS):
        active = (env.ticks >= lo) & (env.ticks <= hi)
        season[active] = math.exp(weight * config.seasonal_amplitude * config.noise_scale)
    return shock, season


def simulate(option: ControlOption, config: SimConfig | None = None) -> TimeSeriesPanel:
    """Panel of ``config.n_parameters`` columns over ticks ``1..horizon_T``."""
    config = config or SimConfig()
    config.validate_for(option)
    ctx = _context(option, config)
    shock, season = latent_factors(option, config, ctx.env)
    alloc = allocate_columns(config.n_parameters)
    labels, blocks, rows = [], [], []
    col = 0
    for block, count in alloc.items():
        make = _ARCHETYPES[block]
        for j in range(count):
            label, base = make(ctx, j)
            noise = np.exp(config.noise_scale * normals(config.seed, col, ctx.t.size))
            v = base * noise
            if block in SHOCKED_BLOCKS:
                v = v * shock
            if block in SEASONAL_BLOCKS:
                v = v * season
            labels.append(label)
            blocks.append(block)
            rows.append(v)
            col += 1
    meta = tuple(ParameterMeta(i + 1, lab, b) for i, (lab, b) in enumerate(zip(labels, blocks)))
    return TimeSeriesPanel(meta, ctx.t, np.vstack(rows))


# ---------------------------------------------------------------------------
# Scenario config files


_OPTION_FIELDS = {f.name for f in fields(ControlOption)}
_CONFIG_FIELDS = {f.name for f in fields(SimConfig)}


def _coerce(key: str, text: str):
    try:
        if key in {"id", "sawlog_sale_start", "products_sale_start", "asset_offset_months",
                   "n_parameters", "horizon_T", "seed"}:
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigError(f"invalid value for {key}: {text!r}") from None


def parse_scenario_config(text: str) -> dict[str, object]:
    """``key = value`` lines; ``#`` starts a comment.  Keys must be known fields."""
    out: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S.*?)", line)
        if not m:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, value = m.groups()
        if key not in _OPTION_FIELDS | _CONFIG_FIELDS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        out[key] = _coerce(key, value)
    return out


def load_scenario_config(path: str | Path) -> dict[str, object]:
    return parse_scenario_config(Path(path).read_text(encoding="utf-8"))


def resolve(values: dict[str, object], option: ControlOption | None = None,
            config: SimConfig | None = None) -> tuple[ControlOption, SimConfig]:
    """Apply parsed config values over an option preset and default config."""
    opt_vals = {k: v for k, v in values.items() if k in _OPTION_FIELDS}
    cfg_vals = {k: v for k, v in values.items() if k in _CONFIG_FIELDS}
    if option is None:
        if "id" not in opt_vals:
            raise ConfigError("no control option given (set 'id' or pass --option)")
        option = get_option(int(opt_vals["id"]))
    option = replace(option, **opt_vals)
    config = replace(config or SimConfig(), **cfg_vals)
    return option, config


def as_dict(obj) -> dict:
    return asdict(obj)
