//! Equilibria and stability classification.
//!
//! Every equilibrium is classified by two independent routes that must agree:
//!
//! 1. **closed-form conditions** — parameter-interval tests derived from the
//!    linearization (transcribed once, with the intermediate quantities named
//!    by role), and
//! 2. **eigenvalue moduli** — numeric eigenvalues of the (analytic) Jacobian,
//!    computed with a cancellation-stable quadratic solve.
//!
//! Both routes are reported side by side in [`EquilibriumReport`]; the
//! `agreement` flag records whether they match. Classifications within
//! `tol` of a modulus-one boundary are declared [`ClassTag::NonHyperbolic`]
//! rather than silently rounded to a side.

use crate::error::{Error, Result};
use crate::maps::{growth_deriv, PairParams, PairState, SingleParams};
use num_complex::Complex64;

/// Default relative half-width of the non-hyperbolicity band around
/// modulus 1 (and around closed-form boundary values).
pub const DEFAULT_NONHYP_TOL: f64 = 1e-9;

/// Outcome of a stability classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    /// All eigenvalue moduli < 1: locally asymptotically stable.
    Sink,
    /// All eigenvalue moduli > 1: repelling.
    Source,
    /// Moduli on both sides of 1.
    Saddle,
    /// Some modulus within tolerance of 1; the linearization is inconclusive.
    NonHyperbolic,
    /// The closed-form conditions do not cover this parameter point (the
    /// detail records which hypothesis failed).
    Indeterminate,
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ClassTag::Sink => "sink",
            ClassTag::Source => "source",
            ClassTag::Saddle => "saddle",
            ClassTag::NonHyperbolic => "non-hyperbolic",
            ClassTag::Indeterminate => "indeterminate",
        };
        f.write_str(s)
    }
}

/// A classification plus a human-readable account of the condition that fired.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityClass {
    pub tag: ClassTag,
    pub detail: String,
}

impl StabilityClass {
    fn new(tag: ClassTag, detail: impl Into<String>) -> Self {
        Self {
            tag,
            detail: detail.into(),
        }
    }
}

/// Which single-species equilibrium an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleEquilibrium {
    /// x = 0.
    Origin,
    /// x = ln((r − (1+h)) / (k·(1+h))), when it exists.
    Positive,
}

/// Which prey–predator equilibrium an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairEquilibrium {
    /// (0, 0).
    Trivial,
    /// (ln((r−1)/k), 0) — prey persists, predator extinct.
    Boundary,
    /// Coexistence point ((1+c)/d, y*).
    Interior,
}

/// Role of an equilibrium within its model, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Trivial,
    Boundary,
    Interior,
}

impl std::fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EquilibriumKind::Trivial => "trivial",
            EquilibriumKind::Boundary => "boundary",
            EquilibriumKind::Interior => "interior",
        };
        f.write_str(s)
    }
}

/// One equilibrium with existence information and both classifications.
#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub kind: EquilibriumKind,
    /// Prey coordinate; NaN when the equilibrium does not exist.
    pub x: f64,
    /// Predator coordinate (None for single-species reports).
    pub y: Option<f64>,
    pub exists: bool,
    /// Existence condition, evaluated for the given parameters.
    pub condition: String,
    pub class_theorem: Option<StabilityClass>,
    pub class_eigen: Option<StabilityClass>,
    /// Eigenvalues of the linearization (one entry for 1-D maps).
    pub eigenvalues: Vec<Complex64>,
    /// `Some(theorem == eigen)` when both routes produced a definite class.
    pub agreement: Option<bool>,
}

fn agreement_of(t: &StabilityClass, e: &StabilityClass) -> Option<bool> {
    if t.tag == ClassTag::Indeterminate || e.tag == ClassTag::Indeterminate {
        None
    } else {
        Some(t.tag == e.tag)
    }
}

/// Relative proximity test used for boundary (non-hyperbolic) declarations.
fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// single species
// ---------------------------------------------------------------------------

/// Derivative of the single-species map at `x`:
/// `r·(1 + k·eˣ·(1−x))/(1 + k·eˣ)² − h`. Assumes finite `x`.
pub fn derivative_single(p: &SingleParams, x: f64) -> f64 {
    growth_deriv(p.r(), p.k(), x) - p.h()
}

/// The positive fixed point `ln((r − (1+h)) / (k·(1+h)))`, if it exists
/// (requires `r > (1+h)·(1+k)`).
pub fn single_positive_equilibrium(p: &SingleParams) -> Option<f64> {
    let ratio = (p.r() - (1.0 + p.h())) / (p.k() * (1.0 + p.h()));
    (ratio > 1.0).then(|| ratio.ln())
}

/// Classifies a 1-D fixed point from the map derivative at the point.
pub fn classify_scalar(derivative: f64, tol: f64) -> StabilityClass {
    let m = derivative.abs();
    if near(m, 1.0, tol) {
        StabilityClass::new(
            ClassTag::NonHyperbolic,
            format!("|f'| = {m} within {tol} of 1"),
        )
    } else if m < 1.0 {
        StabilityClass::new(ClassTag::Sink, format!("|f'| = {m} < 1"))
    } else {
        StabilityClass::new(ClassTag::Source, format!("|f'| = {m} > 1"))
    }
}

/// Closed-form classification of a single-species equilibrium.
///
/// Origin: compare `r` with `(1+h)·(1+k)` (the derivative there is
/// `r/(1+k) − h`). Positive point: the sink band in `k` is
/// `((r−(1+h))·e^(−2r/m)/(1+h), (r−(1+h))/(1+h))` with
/// `m = (1+h)·(r−(1+h))`; below the band the point is a source, on the
/// boundary non-hyperbolic. Uses [`DEFAULT_NONHYP_TOL`] for boundary bands.
///
/// Errors with [`Error::Precondition`] if the identified equilibrium does
/// not exist for `p`.
pub fn classify_single_theorem(
    p: &SingleParams,
    which: SingleEquilibrium,
) -> Result<StabilityClass> {
    let (r, k, h) = (p.r(), p.k(), p.h());
    let tol = DEFAULT_NONHYP_TOL;
    match which {
        SingleEquilibrium::Origin => {
            let bound = (1.0 + h) * (1.0 + k);
            Ok(if near(r, bound, tol) {
                StabilityClass::new(
                    ClassTag::NonHyperbolic,
                    format!("r = {r} on the boundary (1+h)(1+k) = {bound}"),
                )
            } else if r < bound {
                StabilityClass::new(ClassTag::Sink, format!("r = {r} < (1+h)(1+k) = {bound}"))
            } else {
                StabilityClass::new(ClassTag::Source, format!("r = {r} > (1+h)(1+k) = {bound}"))
            })
        }
        SingleEquilibrium::Positive => {
            if single_positive_equilibrium(p).is_none() {
                return Err(Error::Precondition(format!(
                    "positive equilibrium requires r > (1+h)(1+k); r = {r}, bound = {}",
                    (1.0 + h) * (1.0 + k)
                )));
            }
            let growth_margin = r - (1.0 + h);
            let m = (1.0 + h) * growth_margin;
            let k_low = growth_margin * (-2.0 * r / m).exp() / (1.0 + h);
            let k_high = growth_margin / (1.0 + h); // existence bound, k < k_high holds here
            Ok(if near(k, k_low, tol) {
                StabilityClass::new(
                    ClassTag::NonHyperbolic,
                    format!("k = {k} on the flip boundary {k_low}"),
                )
            } else if k > k_low {
                StabilityClass::new(
                    ClassTag::Sink,
                    format!("k = {k} inside the sink band ({k_low}, {k_high})"),
                )
            } else {
                StabilityClass::new(
                    ClassTag::Source,
                    format!("k = {k} below the flip boundary {k_low}"),
                )
            })
        }
    }
}

/// Reports both single-species equilibria (the origin and, when it exists,
/// the positive point), classified by both routes.
pub fn equilibria_single(p: &SingleParams) -> Vec<EquilibriumReport> {
    let tol = DEFAULT_NONHYP_TOL;
    let mut out = Vec::with_capacity(2);

    let d0 = derivative_single(p, 0.0);
    let t0 = classify_single_theorem(p, SingleEquilibrium::Origin).expect("origin always exists");
    let e0 = classify_scalar(d0, tol);
    out.push(EquilibriumReport {
        kind: EquilibriumKind::Trivial,
        x: 0.0,
        y: None,
        exists: true,
        condition: "always exists".into(),
        agreement: agreement_of(&t0, &e0),
        class_theorem: Some(t0),
        class_eigen: Some(e0),
        eigenvalues: vec![Complex64::new(d0, 0.0)],
    });

    let cond = format!(
        "exists iff r > (1+h)(1+k) ({} vs {})",
        p.r(),
        (1.0 + p.h()) * (1.0 + p.k())
    );
    match single_positive_equilibrium(p) {
        Some(xe) => {
            let de = derivative_single(p, xe);
            let t = classify_single_theorem(p, SingleEquilibrium::Positive)
                .expect("existence checked above");
            let e = classify_scalar(de, tol);
            out.push(EquilibriumReport {
                kind: EquilibriumKind::Interior,
                x: xe,
                y: None,
                exists: true,
                condition: cond,
                agreement: agreement_of(&t, &e),
                class_theorem: Some(t),
                class_eigen: Some(e),
                eigenvalues: vec![Complex64::new(de, 0.0)],
            });
        }
        None => out.push(EquilibriumReport {
            kind: EquilibriumKind::Interior,
            x: f64::NAN,
            y: None,
            exists: false,
            condition: cond,
            class_theorem: None,
            class_eigen: None,
            eigenvalues: vec![],
            agreement: None,
        }),
    }
    out
}

// ---------------------------------------------------------------------------
// prey–predator
// ---------------------------------------------------------------------------

/// Prey coordinate of the boundary equilibrium `ln((r−1)/k)`, if `r > 1+k`.
pub fn boundary_equilibrium(p: &PairParams) -> Option<f64> {
    let ratio = (p.r() - 1.0) / p.k();
    (ratio > 1.0).then(|| ratio.ln())
}

/// Coexistence equilibrium `((1+c)/d, (r−k₁)/(a·k₁))` with
/// `k₁ = 1 + k·e^(x*)`, if it exists (requires `r > k₁`).
pub fn interior_equilibrium(p: &PairParams) -> Option<PairState> {
    let x_star = (1.0 + p.c()) / p.d();
    let sat = 1.0 + p.k() * x_star.exp();
    if !sat.is_finite() || p.r() <= sat {
        return None;
    }
    Some(PairState::new(x_star, (p.r() - sat) / (p.a() * sat)))
}

/// Analytic Jacobian of the prey–predator map at `s`.
pub fn jacobian_pair(p: &PairParams, s: PairState) -> [[f64; 2]; 2] {
    [
        [growth_deriv(p.r(), p.k(), s.x) - p.a() * s.y, -p.a() * s.x],
        [p.d() * s.y, p.d() * s.x - p.c()],
    ]
}

/// Eigenvalues of a 2×2 matrix via the characteristic quadratic, using the
/// sign of the trace to avoid cancellation between `tr` and `√disc`.
pub fn eigenvalues_2x2(j: [[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let big = if tr >= 0.0 {
            (tr + sq) / 2.0
        } else {
            (tr - sq) / 2.0
        };
        let small = if big != 0.0 { det / big } else { 0.0 };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let re = tr / 2.0;
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Classifies a fixed point of a 2-D map from its Jacobian eigenvalue moduli.
pub fn classify_by_eigen(j: [[f64; 2]; 2], tol: f64) -> StabilityClass {
    let eig = eigenvalues_2x2(j);
    let m = [eig[0].norm(), eig[1].norm()];
    if m.iter().any(|&v| near(v, 1.0, tol)) {
        return StabilityClass::new(
            ClassTag::NonHyperbolic,
            format!(
                "eigenvalue modulus within {tol} of 1 (|λ| = {}, {})",
                m[0], m[1]
            ),
        );
    }
    let inside = m.iter().filter(|&&v| v < 1.0).count();
    match inside {
        2 => StabilityClass::new(ClassTag::Sink, format!("|λ| = {}, {} both < 1", m[0], m[1])),
        0 => StabilityClass::new(
            ClassTag::Source,
            format!("|λ| = {}, {} both > 1", m[0], m[1]),
        ),
        _ => StabilityClass::new(
            ClassTag::Saddle,
            format!("|λ| = {}, {} straddle 1", m[0], m[1]),
        ),
    }
}

/// Characteristic quadratic `F(λ) = λ² + p·λ + q` of a 2×2 Jacobian
/// (`p = −trace`, `q = det`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JuryQuadratic {
    pub p: f64,
    pub q: f64,
}

impl JuryQuadratic {
    pub fn from_jacobian(j: [[f64; 2]; 2]) -> Self {
        Self {
            p: -(j[0][0] + j[1][1]),
            q: j[0][0] * j[1][1] - j[0][1] * j[1][0],
        }
    }

    /// F(1) = 1 + p + q.
    pub fn at_one(&self) -> f64 {
        1.0 + self.p + self.q
    }

    /// F(−1) = 1 − p + q.
    pub fn at_minus_one(&self) -> f64 {
        1.0 - self.p + self.q
    }
}

/// Root-location test for `F(λ) = λ² + p·λ + q` under the hypothesis
/// `F(1) > 0` (returns Indeterminate otherwise):
///
/// * sink   iff `F(−1) > 0` and `q < 1`
/// * source iff `F(−1) > 0` and `q > 1`
/// * saddle iff `F(−1) < 0`
/// * non-hyperbolic if `F(−1) = 0` (a root at −1) or `q = 1` with
///   `F(−1) > 0` (complex pair on the unit circle)
pub fn jury_classify(f: &JuryQuadratic) -> StabilityClass {
    let f1 = f.at_one();
    let fm1 = f.at_minus_one();
    if f1 <= 0.0 {
        return StabilityClass::new(
            ClassTag::Indeterminate,
            format!("test requires F(1) > 0, got F(1) = {f1}"),
        );
    }
    if fm1 == 0.0 {
        let extra = if f.p == 0.0 || f.p == 2.0 {
            " (second root also on the unit circle)"
        } else {
            ""
        };
        return StabilityClass::new(ClassTag::NonHyperbolic, format!("λ = −1 is a root{extra}"));
    }
    if fm1 < 0.0 {
        return StabilityClass::new(ClassTag::Saddle, format!("F(−1) = {fm1} < 0"));
    }
    if f.q == 1.0 {
        return StabilityClass::new(
            ClassTag::NonHyperbolic,
            "q = 1 with F(±1) > 0: complex pair on the unit circle",
        );
    }
    if f.q < 1.0 {
        StabilityClass::new(
            ClassTag::Sink,
            format!("F(−1) = {fm1} > 0 and q = {} < 1", f.q),
        )
    } else {
        StabilityClass::new(
            ClassTag::Source,
            format!("F(−1) = {fm1} > 0 and q = {} > 1", f.q),
        )
    }
}

/// Derived boundary values that govern the coexistence point's stability.
///
/// With `x* = (1+c)/d` and `E = k·e^(x*)`:
///
/// * `saturation` — `k₁ = 1 + E`, also the existence threshold for `r`
/// * `d_min` — `2E/k₁`; the flip-boundary derivation divides by
///   `x*·(d·k₁ − 2E)`, so the branch conditions require `d > d_min`
/// * `r_flip` — `k₁²·(d·x* − 4) / (x*·(d·k₁ − 2E))`, where `F(−1) = 0`
/// * `r_det` — `d·k₁² / (d·k₁ − E)`, where the determinant is 1
///   (meaningful when `d > d_min`)
/// * `excluded_lo`/`excluded_hi` — `2k₁²/(x*E)` and `4k₁²/(x*E)`: at these
///   `r` the flip boundary degenerates (trace ±0/2 cases) and the
///   non-hyperbolic branch does not apply
#[derive(Debug, Clone, Copy)]
pub struct InteriorThresholds {
    pub x_star: f64,
    pub saturation: f64,
    pub d_min: f64,
    pub r_flip: f64,
    pub r_det: f64,
    pub excluded_lo: f64,
    pub excluded_hi: f64,
}

impl InteriorThresholds {
    /// The open `r` interval on which the coexistence point is a sink:
    /// `(max{saturation, r_flip}, r_det)`, when non-empty.
    pub fn sink_interval(&self) -> Option<(f64, f64)> {
        let lo = self.saturation.max(self.r_flip);
        let hi = self.r_det;
        (lo < hi).then_some((lo, hi))
    }
}

/// Computes [`InteriorThresholds`] for `p`. Errors if `e^(x*)` overflows
/// (the coexistence point cannot exist for any admissible `r` in that case).
pub fn interior_thresholds(p: &PairParams) -> Result<InteriorThresholds> {
    let x_star = (1.0 + p.c()) / p.d();
    let e = p.k() * x_star.exp();
    if !e.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "saturation term k·e^(x*) overflows for x* = {x_star}"
        )));
    }
    let sat = 1.0 + e;
    let d = p.d();
    Ok(InteriorThresholds {
        x_star,
        saturation: sat,
        d_min: 2.0 * e / sat,
        r_flip: sat * sat * (d * x_star - 4.0) / (x_star * (d * sat - 2.0 * e)),
        r_det: d * sat * sat / (d * sat - e),
        excluded_lo: 2.0 * sat * sat / (x_star * e),
        excluded_hi: 4.0 * sat * sat / (x_star * e),
    })
}

/// Closed-form classification of a prey–predator equilibrium.
///
/// * Trivial: eigenvalues are `r/(1+k)` and `−c`; compare `r` with `1+k`
///   and `c` with 1.
/// * Boundary: eigenvalue moduli translate to bands in `k` with boundaries
///   `k_flip = (r−1)·e^(−2r/(r−1))`, `k_up = (r−1)·e^(−(c+1)/d)`,
///   `k_down = (r−1)·e^(−(c−1)/d)`. One corner of parameter space (prey
///   direction repelling with λ₂ < −1) is outside the stated cases and
///   returns Indeterminate.
/// * Interior: branch on [`InteriorThresholds`]; configurations with
///   `d ≤ d_min` (or on an excluded flip degeneracy) return Indeterminate —
///   callers should fall back to the eigenvalue route for a verdict.
///
/// Errors with [`Error::Precondition`] if the equilibrium does not exist.
pub fn classify_pair_theorem(p: &PairParams, which: PairEquilibrium) -> Result<StabilityClass> {
    let tol = DEFAULT_NONHYP_TOL;
    let (r, k, c, d) = (p.r(), p.k(), p.c(), p.d());
    match which {
        PairEquilibrium::Trivial => {
            let bound = 1.0 + k;
            Ok(if near(r, bound, tol) || near(c, 1.0, tol) {
                StabilityClass::new(
                    ClassTag::NonHyperbolic,
                    format!("on a boundary: r vs 1+k ({r} vs {bound}) or c vs 1 (c = {c})"),
                )
            } else if r < bound && c < 1.0 {
                StabilityClass::new(ClassTag::Sink, format!("r = {r} < 1+k and c = {c} < 1"))
            } else if r > bound && c > 1.0 {
                StabilityClass::new(ClassTag::Source, format!("r = {r} > 1+k and c = {c} > 1"))
            } else {
                StabilityClass::new(
                    ClassTag::Saddle,
                    format!(
                        "one direction attracts, one repels (r vs 1+k: {r} vs {bound}, c = {c})"
                    ),
                )
            })
        }
        PairEquilibrium::Boundary => {
            let x1 = boundary_equilibrium(p).ok_or_else(|| {
                Error::Precondition(format!(
                    "boundary equilibrium requires r > 1 + k (r = {r}, 1+k = {})",
                    1.0 + k
                ))
            })?;
            let k_flip = (r - 1.0) * (-2.0 * r / (r - 1.0)).exp();
            let k_up = (r - 1.0) * (-(c + 1.0) / d).exp();
            let k_down = (r - 1.0) * (-(c - 1.0) / d).exp();
            if near(k, k_flip, tol) || near(k, k_up, tol) || near(k, k_down, tol) {
                return Ok(StabilityClass::new(
                    ClassTag::NonHyperbolic,
                    format!(
                        "k = {k} on a boundary (flip {k_flip}, predator ±1 at {k_up}, {k_down})"
                    ),
                ));
            }
            // prey direction attracts iff k > k_flip; predator eigenvalue
            // d·x₁ − c is <1 in modulus iff k ∈ (k_up, k_down).
            let prey_in = k > k_flip;
            let pred = d * x1 - c;
            Ok(if prey_in && pred.abs() < 1.0 {
                StabilityClass::new(
                    ClassTag::Sink,
                    format!(
                        "k = {k} in ({}, existence) and predator eigenvalue {pred} in (−1, 1)",
                        k_flip
                    ),
                )
            } else if !prey_in && pred > 1.0 {
                StabilityClass::new(
                    ClassTag::Source,
                    format!("k = {k} < flip boundary {k_flip} and predator eigenvalue {pred} > 1"),
                )
            } else if prey_in || (pred.abs() < 1.0) {
                StabilityClass::new(
                    ClassTag::Saddle,
                    format!("exactly one direction attracts (prey attracts: {prey_in}, predator eigenvalue {pred})"),
                )
            } else {
                // prey repels and predator eigenvalue < −1: not covered.
                StabilityClass::new(
                    ClassTag::Indeterminate,
                    format!(
                        "configuration outside the stated cases: k = {k} < {k_flip} (prey repels) with predator eigenvalue {pred} < −1"
                    ),
                )
            })
        }
        PairEquilibrium::Interior => {
            let eq = interior_equilibrium(p).ok_or_else(|| {
                Error::Precondition(format!(
                    "interior equilibrium requires r > 1 + k·e^((1+c)/d) (r = {r})"
                ))
            })?;
            let th = interior_thresholds(p)?;
            debug_assert!(eq.y > 0.0);
            if near(d, th.d_min, tol) {
                return Ok(StabilityClass::new(
                    ClassTag::Indeterminate,
                    format!(
                        "d = {d} within tolerance of the divisor boundary d_min = {}",
                        th.d_min
                    ),
                ));
            }
            if near(r, th.r_flip, tol) {
                // flip boundary; the two excluded r values have the second
                // root on the unit circle as well, which the stated
                // conditions rule out.
                if near(r, th.excluded_lo, tol) || near(r, th.excluded_hi, tol) {
                    return Ok(StabilityClass::new(
                        ClassTag::Indeterminate,
                        format!(
                            "r = {r} on the flip boundary but at an excluded degeneracy ({} or {})",
                            th.excluded_lo, th.excluded_hi
                        ),
                    ));
                }
                return Ok(StabilityClass::new(
                    ClassTag::NonHyperbolic,
                    format!("r = {r} on the flip boundary r_flip = {}", th.r_flip),
                ));
            }
            if d < th.d_min {
                return Ok(StabilityClass::new(
                    ClassTag::Indeterminate,
                    format!("hypothesis d > d_min fails (d = {d}, d_min = {})", th.d_min),
                ));
            }
            if near(r, th.r_det, tol) {
                return Ok(StabilityClass::new(
                    ClassTag::Indeterminate,
                    format!(
                        "r = {r} on the unit-determinant boundary r_det = {} (not covered by the stated cases)",
                        th.r_det
                    ),
                ));
            }
            Ok(if r < th.r_flip {
                StabilityClass::new(
                    ClassTag::Saddle,
                    format!(
                        "saturation {} < r = {r} < r_flip = {}",
                        th.saturation, th.r_flip
                    ),
                )
            } else if r < th.r_det {
                StabilityClass::new(
                    ClassTag::Sink,
                    format!(
                        "r = {r} in the sink interval ({}, {})",
                        th.saturation.max(th.r_flip),
                        th.r_det
                    ),
                )
            } else {
                StabilityClass::new(
                    ClassTag::Source,
                    format!(
                        "r = {r} > max(r_flip, r_det, saturation) = {}",
                        th.r_flip.max(th.r_det).max(th.saturation)
                    ),
                )
            })
        }
    }
}

/// Reports the trivial, boundary, and interior equilibria of the
/// prey–predator map, classified by both routes.
pub fn equilibria_pair(p: &PairParams) -> Vec<EquilibriumReport> {
    let tol = DEFAULT_NONHYP_TOL;
    let mut out = Vec::with_capacity(3);

    let make = |kind: EquilibriumKind, s: PairState, condition: String, theorem: StabilityClass| {
        let j = jacobian_pair(p, s);
        let eigen = classify_by_eigen(j, tol);
        EquilibriumReport {
            kind,
            x: s.x,
            y: Some(s.y),
            exists: true,
            condition,
            agreement: agreement_of(&theorem, &eigen),
            class_theorem: Some(theorem),
            class_eigen: Some(eigen),
            eigenvalues: eigenvalues_2x2(j).to_vec(),
        }
    };
    let missing = |kind: EquilibriumKind, condition: String| EquilibriumReport {
        kind,
        x: f64::NAN,
        y: Some(f64::NAN),
        exists: false,
        condition,
        class_theorem: None,
        class_eigen: None,
        eigenvalues: vec![],
        agreement: None,
    };

    let trivial = classify_pair_theorem(p, PairEquilibrium::Trivial).expect("always exists");
    out.push(make(
        EquilibriumKind::Trivial,
        PairState::new(0.0, 0.0),
        "always exists".into(),
        trivial,
    ));

    let cond_b = format!("exists iff r > 1 + k ({} vs {})", p.r(), 1.0 + p.k());
    match boundary_equilibrium(p) {
        Some(x1) => {
            let theorem =
                classify_pair_theorem(p, PairEquilibrium::Boundary).expect("existence checked");
            out.push(make(
                EquilibriumKind::Boundary,
                PairState::new(x1, 0.0),
                cond_b,
                theorem,
            ));
        }
        None => out.push(missing(EquilibriumKind::Boundary, cond_b)),
    }

    let sat = interior_thresholds(p)
        .map(|t| t.saturation)
        .unwrap_or(f64::INFINITY);
    let cond_i = format!("exists iff r > 1 + k·e^((1+c)/d) ({} vs {sat})", p.r());
    match interior_equilibrium(p) {
        Some(s) => {
            let theorem =
                classify_pair_theorem(p, PairEquilibrium::Interior).expect("existence checked");
            out.push(make(EquilibriumKind::Interior, s, cond_i, theorem));
        }
        None => out.push(missing(EquilibriumKind::Interior, cond_i)),
    }
    out
}
