//! The population maps and trajectory simulation.
//!
//! Three discrete-time maps share a saturating growth term `r·x / (1 + k·eˣ)`:
//!
//! * single species with constant proportional harvest `h`:
//!   `x' = r·x/(1 + k·eˣ) − h·x`
//! * prey–predator:
//!   `x' = r·x/(1 + k·eˣ) − a·y·x`, `y' = −c·y + d·x·y`
//! * generalized prey–predator (simulation only):
//!   `x' = r·xᵐ/(1 + k·e^(b·x))ⁿ − a·y·x`, `y' = y·(−c + d·x)`
//!
//! Negative step results are clamped to zero (densities stay non-negative) and
//! the clamping is recorded on the returned trajectory. Growth terms are
//! evaluated in an exponent-shifted form for large `x` so they never overflow.

use crate::error::{ensure_finite, Error, Result};

/// Inputs above this use the exponent-shifted growth form to avoid overflow.
const EXP_SHIFT_THRESHOLD: f64 = 50.0;

/// Saturating growth term `r·x / (1 + k·eˣ)`, overflow-safe for any finite x.
pub(crate) fn growth(r: f64, k: f64, x: f64) -> f64 {
    if x > EXP_SHIFT_THRESHOLD {
        // r·x·e⁻ˣ / (e⁻ˣ + k) is algebraically identical and stays bounded.
        let em = (-x).exp();
        r * x * em / (em + k)
    } else {
        r * x / (1.0 + k * x.exp())
    }
}

/// Derivative of [`growth`] with respect to x:
/// `r·(1 + k·eˣ·(1 − x)) / (1 + k·eˣ)²`, overflow-safe.
pub(crate) fn growth_deriv(r: f64, k: f64, x: f64) -> f64 {
    if x > EXP_SHIFT_THRESHOLD {
        let em = (-x).exp();
        r * (em * em + k * em * (1.0 - x)) / ((em + k) * (em + k))
    } else {
        let e = x.exp();
        let denom = 1.0 + k * e;
        r * (1.0 + k * e * (1.0 - x)) / (denom * denom)
    }
}

/// Parameters of the single-species map `x' = r·x/(1 + k·eˣ) − h·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleParams {
    r: f64,
    k: f64,
    h: f64,
}

impl SingleParams {
    /// Unharvested map (`h = 0`). Requires finite `r > 0`, `k > 0`.
    pub fn new(r: f64, k: f64) -> Result<Self> {
        Self::with_harvest(r, k, 0.0)
    }

    /// Map with constant proportional harvest. Requires `0 ≤ h < 1`.
    pub fn with_harvest(r: f64, k: f64, h: f64) -> Result<Self> {
        ensure_finite("r", r)?;
        ensure_finite("k", k)?;
        ensure_finite("h", h)?;
        if r <= 0.0 {
            return Err(Error::param("r", format!("must be > 0, got {r}")));
        }
        if k <= 0.0 {
            return Err(Error::param("k", format!("must be > 0, got {k}")));
        }
        if !(0.0..1.0).contains(&h) {
            return Err(Error::param("h", format!("must be in [0, 1), got {h}")));
        }
        Ok(Self { r, k, h })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Parameters of the prey–predator map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams {
    r: f64,
    k: f64,
    a: f64,
    c: f64,
    d: f64,
}

impl PairParams {
    /// Requires finite `r, k, a, d > 0` and `c ≥ 0`.
    pub fn new(r: f64, k: f64, a: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("k", k), ("a", a), ("c", c), ("d", d)] {
            ensure_finite(name, v)?;
        }
        for (name, v) in [("r", r), ("k", k), ("a", a), ("d", d)] {
            if v <= 0.0 {
                return Err(Error::param(name, format!("must be > 0, got {v}")));
            }
        }
        if c < 0.0 {
            return Err(Error::param("c", format!("must be ≥ 0, got {c}")));
        }
        Ok(Self { r, k, a, c, d })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Parameters of the generalized prey–predator map (simulation only; the
/// closed-form stability results apply to the specializations above).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralMapParams {
    r: f64,
    k: f64,
    b: f64,
    m: f64,
    n: f64,
    a: f64,
    c: f64,
    d: f64,
}

impl GeneralMapParams {
    /// Requires finite `r, k, b, m, n > 0` and `a, c, d ≥ 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(r: f64, k: f64, b: f64, m: f64, n: f64, a: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [
            ("r", r),
            ("k", k),
            ("b", b),
            ("m", m),
            ("n", n),
            ("a", a),
            ("c", c),
            ("d", d),
        ] {
            ensure_finite(name, v)?;
        }
        if r <= 0.0 || k <= 0.0 || b <= 0.0 || m <= 0.0 || n <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "r, k, b, m, n must all be > 0 (got r={r}, k={k}, b={b}, m={m}, n={n})"
            )));
        }
        if a < 0.0 || c < 0.0 || d < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "a, c, d must be ≥ 0 (got a={a}, c={c}, d={d})"
            )));
        }
        Ok(Self {
            r,
            k,
            b,
            m,
            n,
            a,
            c,
            d,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Prey–predator state (densities).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState {
    pub x: f64,
    pub y: f64,
}

impl PairState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// A simulated orbit: states `s_{t0}, s_{t0+1}, …` plus a flag recording
/// whether any step produced a negative density that was clamped to zero.
/// Analysis downstream of a clamped trajectory should treat it with care;
/// the clamp is a modeling guard, not part of the smooth dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub t0: usize,
    pub states: Vec<S>,
    pub clamped: bool,
}

impl<S: Copy> Trajectory<S> {
    /// Number of stored states (horizon + 1).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Final state.
    pub fn last(&self) -> S {
        *self.states.last().expect("trajectory is never empty")
    }
}

pub(crate) fn clamp_density(v: f64) -> (f64, bool) {
    if v < 0.0 {
        (0.0, true)
    } else {
        (v, false)
    }
}

/// One step of the single-species map. Accepts any finite `x`; the result is
/// clamped to 0 if the raw step is negative.
pub fn step_single(p: &SingleParams, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(clamp_density(growth(p.r, p.k, x) - p.h * x).0)
}

/// One step of the prey–predator map, clamping each component at 0.
pub fn step_pair(p: &PairParams, s: PairState) -> Result<PairState> {
    ensure_finite("x", s.x)?;
    ensure_finite("y", s.y)?;
    let (x, _) = clamp_density(growth(p.r, p.k, s.x) - p.a * s.y * s.x);
    let (y, _) = clamp_density(-p.c * s.y + p.d * s.x * s.y);
    Ok(PairState { x, y })
}

/// One step of the generalized map, clamping each component at 0.
pub fn step_general(p: &GeneralMapParams, s: PairState) -> Result<PairState> {
    ensure_finite("x", s.x)?;
    ensure_finite("y", s.y)?;
    let (x, _) = clamp_density(general_growth(p, s.x) - p.a * s.y * s.x);
    let (y, _) = clamp_density(s.y * (-p.c + p.d * s.x));
    Ok(PairState { x, y })
}

/// Generalized growth term `r·xᵐ / (1 + k·e^(b·x))ⁿ`, overflow-safe.
fn general_growth(p: &GeneralMapParams, x: f64) -> f64 {
    if p.b * x > EXP_SHIFT_THRESHOLD {
        // r·xᵐ·(e^(−b·x) / (e^(−b·x) + k))ⁿ avoids evaluating e^(b·x).
        let em = (-p.b * x).exp();
        p.r * x.abs().powf(p.m) * x.signum() * (em / (em + p.k)).powf(p.n)
    } else {
        p.r * signed_pow(x, p.m) / (1.0 + p.k * (p.b * x).exp()).powf(p.n)
    }
}

// xᵐ for possibly-negative probe points: use |x|ᵐ·sign(x) so the map stays
// real-valued when a root finder wanders left of zero.
fn signed_pow(x: f64, m: f64) -> f64 {
    x.abs().powf(m) * x.signum()
}

fn run<S: Copy>(
    s0: S,
    horizon: usize,
    mut step: impl FnMut(S) -> Result<(S, bool)>,
) -> Result<Trajectory<S>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument(
            "simulation horizon must be ≥ 1".into(),
        ));
    }
    let mut states = Vec::with_capacity(horizon + 1);
    let mut clamped = false;
    states.push(s0);
    let mut s = s0;
    for _ in 0..horizon {
        let (next, cl) = step(s)?;
        clamped |= cl;
        states.push(next);
        s = next;
    }
    Ok(Trajectory {
        t0: 0,
        states,
        clamped,
    })
}

/// Simulates `horizon ≥ 1` steps of the single-species map from `x0`,
/// returning `horizon + 1` states.
pub fn simulate_single(p: &SingleParams, x0: f64, horizon: usize) -> Result<Trajectory<f64>> {
    ensure_finite("x0", x0)?;
    run(x0, horizon, |x| {
        let (v, cl) = clamp_density(growth(p.r, p.k, x) - p.h * x);
        Ok((v, cl))
    })
}

/// Simulates the prey–predator map.
pub fn simulate_pair(
    p: &PairParams,
    s0: PairState,
    horizon: usize,
) -> Result<Trajectory<PairState>> {
    ensure_finite("x0", s0.x)?;
    ensure_finite("y0", s0.y)?;
    run(s0, horizon, |s| {
        let (x, cx) = clamp_density(growth(p.r, p.k, s.x) - p.a * s.y * s.x);
        let (y, cy) = clamp_density(-p.c * s.y + p.d * s.x * s.y);
        Ok((PairState { x, y }, cx || cy))
    })
}

/// Simulates the generalized map.
pub fn simulate_general(
    p: &GeneralMapParams,
    s0: PairState,
    horizon: usize,
) -> Result<Trajectory<PairState>> {
    ensure_finite("x0", s0.x)?;
    ensure_finite("y0", s0.y)?;
    run(s0, horizon, |s| {
        let (x, cx) = clamp_density(general_growth(p, s.x) - p.a * s.y * s.x);
        let (y, cy) = clamp_density(s.y * (-p.c + p.d * s.x));
        Ok((PairState { x, y }, cx || cy))
    })
}
