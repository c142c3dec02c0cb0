//! Basin-of-attraction scans and fixed-point searches for N-dimensional maps.
//!
//! A *basin scan* seeds a rectangular grid of starting points, iterates the
//! map from each, and checks a claim of the form "every interior start
//! converges to the target point". The verdict is deliberately conservative:
//! [`Verdict::Refuted`] carries the first interior counterexample as a
//! witness, and a scan with no interior samples is
//! [`Verdict::Inconclusive`] rather than vacuously consistent.
//!
//! [`find_fixed_points`] locates fixed points numerically (damped Newton from
//! grid seeds, plus sign-change bisection in one dimension) so that
//! closed-form equilibrium formulas can be cross-checked against the map
//! itself.

use crate::error::{Error, Result};
use crate::exec;

/// Sampling parameters for [`basin_scan`] over the box `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct BasinConfig<const N: usize> {
    pub lo: [f64; N],
    pub hi: [f64; N],
    /// Grid points per axis, endpoints included (`grid^N` starts total).
    pub grid: usize,
    /// Iterations applied to every start before the final classification.
    pub burn_in: usize,
    /// Euclidean radius around the target that counts as converged.
    pub conv_tol: f64,
    /// A coordinate of this magnitude marks the orbit as escaped.
    pub escape_bound: f64,
    /// Fraction of each axis length treated as boundary (non-interior).
    pub interior_margin: f64,
}

impl<const N: usize> BasinConfig<N> {
    /// A config over `[lo, hi]` with default sampling: 200 points per axis,
    /// 2000-step burn-in, convergence radius 1e−6, escape bound 1e8,
    /// interior margin 1e−3.
    pub fn new(lo: [f64; N], hi: [f64; N]) -> Result<Self> {
        let cfg = Self {
            lo,
            hi,
            grid: 200,
            burn_in: 2000,
            conv_tol: 1e-6,
            escape_bound: 1e8,
            interior_margin: 1e-3,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the sampling settings; called by the scan entry points, and
    /// public so callers that mutate fields can validate eagerly.
    pub fn validate(&self) -> Result<()> {
        if N == 0 {
            return Err(Error::InvalidArgument(
                "box must have at least one axis".into(),
            ));
        }
        for i in 0..N {
            if !self.lo[i].is_finite() || !self.hi[i].is_finite() || self.lo[i] >= self.hi[i] {
                return Err(Error::InvalidArgument(format!(
                    "axis {i}: need finite lo < hi, got [{}, {}]",
                    self.lo[i], self.hi[i]
                )));
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid must be at least 2 points per axis, got {}",
                self.grid
            )));
        }
        if self.burn_in == 0 {
            return Err(Error::InvalidArgument("burn_in must be positive".into()));
        }
        let positive = |v: f64| v > 0.0; // false for NaN as well
        if !positive(self.conv_tol) || !positive(self.escape_bound) {
            return Err(Error::InvalidArgument(
                "conv_tol and escape_bound must be positive".into(),
            ));
        }
        if !(self.interior_margin > 0.0 && self.interior_margin < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "interior_margin must lie in (0, 0.5), got {}",
                self.interior_margin
            )));
        }
        Ok(())
    }

    fn n_grid_samples(&self) -> Result<usize> {
        self.grid
            .checked_pow(N as u32)
            .ok_or_else(|| Error::InvalidArgument(format!("grid {}^{N} overflows", self.grid)))
    }

    /// Grid start for flat index `idx` (axis 0 varies slowest).
    fn grid_point(&self, mut idx: usize) -> [f64; N] {
        let mut digits = [0usize; N];
        for axis in (0..N).rev() {
            digits[axis] = idx % self.grid;
            idx /= self.grid;
        }
        let mut s = [0.0; N];
        for axis in 0..N {
            let len = self.hi[axis] - self.lo[axis];
            s[axis] = self.lo[axis] + len * digits[axis] as f64 / (self.grid - 1) as f64;
        }
        s
    }

    fn is_interior(&self, s: &[f64; N]) -> bool {
        (0..N).all(|i| {
            let m = self.interior_margin * (self.hi[i] - self.lo[i]);
            s[i] > self.lo[i] + m && s[i] < self.hi[i] - m
        })
    }

    /// The extra start planted just off the target (shifted by 1e−4 of each
    /// axis length, flipped or clamped to stay inside the box).
    fn planted_start(&self, target: &[f64; N]) -> [f64; N] {
        let mut s = [0.0; N];
        for i in 0..N {
            let off = 1e-4 * (self.hi[i] - self.lo[i]);
            let mut v = target[i] + off;
            if v > self.hi[i] {
                v = target[i] - off;
            }
            s[i] = v.clamp(self.lo[i], self.hi[i]);
        }
        s
    }
}

/// Fate of one orbit after the burn-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Final state within `conv_tol` of the target.
    Converged,
    /// Still inside bounds but not at the target.
    Other,
    /// Left the escape bound (or produced a non-finite state).
    Escaped,
}

impl Outcome {
    /// Stable numeric code used in exported tables (0/1/2).
    pub fn code(self) -> u8 {
        match self {
            Outcome::Converged => 0,
            Outcome::Other => 1,
            Outcome::Escaped => 2,
        }
    }
}

/// One sampled orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord<const N: usize> {
    pub start: [f64; N],
    pub outcome: Outcome,
    /// Converged: first step entering the convergence ball. Escaped: the
    /// step at which the bound was crossed. Other: the burn-in length.
    pub iters: usize,
    /// Whether the start is interior to the box (margin applied).
    pub interior: bool,
}

/// Result of testing "all interior starts converge to the target".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict<const N: usize> {
    /// Every interior sample converged.
    Consistent,
    /// At least one interior sample did not; `witness` is the first such
    /// start in grid order.
    Refuted { witness: [f64; N] },
    /// No interior samples were available to test.
    Inconclusive,
}

/// Full outcome of a basin scan.
#[derive(Debug, Clone)]
pub struct BasinReport<const N: usize> {
    pub target: [f64; N],
    pub verdict: Verdict<N>,
    /// All sampled orbits: `grid^N` grid starts in grid order, then the
    /// planted near-target start.
    pub samples: Vec<SampleRecord<N>>,
    /// Index of the planted sample within `samples`.
    pub planted_index: usize,
    pub n_converged: usize,
    pub n_other: usize,
    pub n_escaped: usize,
}

fn dist<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    (0..N).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

fn run_orbit<const N: usize, F>(
    map: &F,
    start: [f64; N],
    target: &[f64; N],
    cfg: &BasinConfig<N>,
) -> (Outcome, usize)
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let mut s = start;
    let mut first_in = if dist(&s, target) <= cfg.conv_tol {
        Some(0)
    } else {
        None
    };
    for t in 1..=cfg.burn_in {
        s = match map(s) {
            Ok(v) => v,
            Err(_) => return (Outcome::Escaped, t),
        };
        if s.iter()
            .any(|v| !v.is_finite() || v.abs() > cfg.escape_bound)
        {
            return (Outcome::Escaped, t);
        }
        if first_in.is_none() && dist(&s, target) <= cfg.conv_tol {
            first_in = Some(t);
        }
    }
    if dist(&s, target) <= cfg.conv_tol {
        (
            Outcome::Converged,
            first_in.expect("inside ball at final step"),
        )
    } else {
        (Outcome::Other, cfg.burn_in)
    }
}

fn scan_impl<const N: usize, F>(
    map: &F,
    target: [f64; N],
    cfg: &BasinConfig<N>,
    parallel: bool,
) -> Result<BasinReport<N>>
where
    F: Fn([f64; N]) -> Result<[f64; N]> + Sync,
{
    cfg.validate()?;
    for (i, v) in target.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: "basin target coordinate",
                value: target[i],
            });
        }
    }
    let image = map(target)?;
    let residual = dist(&image, &target);
    let is_fixed_point = residual < 1e-8; // false for NaN as well
    if !is_fixed_point {
        return Err(Error::Precondition(format!(
            "target is not a fixed point: |map(target) − target| = {residual}"
        )));
    }

    let n_grid = cfg.n_grid_samples()?;
    let total = n_grid + 1;
    let planted = cfg.planted_start(&target);
    let job = |idx: usize| -> SampleRecord<N> {
        let start = if idx < n_grid {
            cfg.grid_point(idx)
        } else {
            planted
        };
        let (outcome, iters) = run_orbit(map, start, &target, cfg);
        SampleRecord {
            start,
            outcome,
            iters,
            interior: cfg.is_interior(&start),
        }
    };
    let samples = if parallel {
        exec::map_indexed(total, job)
    } else {
        exec::map_indexed_seq(total, job)
    };

    let mut n_converged = 0;
    let mut n_other = 0;
    let mut n_escaped = 0;
    let mut witness = None;
    let mut any_interior = false;
    for rec in &samples {
        match rec.outcome {
            Outcome::Converged => n_converged += 1,
            Outcome::Other => n_other += 1,
            Outcome::Escaped => n_escaped += 1,
        }
        if rec.interior {
            any_interior = true;
            if rec.outcome != Outcome::Converged && witness.is_none() {
                witness = Some(rec.start);
            }
        }
    }
    let verdict = match (any_interior, witness) {
        (false, _) => Verdict::Inconclusive,
        (true, None) => Verdict::Consistent,
        (true, Some(w)) => Verdict::Refuted { witness: w },
    };
    Ok(BasinReport {
        target,
        verdict,
        samples,
        planted_index: n_grid,
        n_converged,
        n_other,
        n_escaped,
    })
}

/// Scans the box in `cfg` and tests whether every interior start converges
/// to `target` (which must be a fixed point of `map` to within 1e−8).
///
/// Runs orbits in parallel when the `parallel` feature is enabled. The
/// report is identical to [`basin_scan_seq`] for the same inputs.
pub fn basin_scan<const N: usize, F>(
    map: F,
    target: [f64; N],
    cfg: &BasinConfig<N>,
) -> Result<BasinReport<N>>
where
    F: Fn([f64; N]) -> Result<[f64; N]> + Sync,
{
    scan_impl(&map, target, cfg, true)
}

/// Single-threaded [`basin_scan`], kept public for benchmarking and for
/// callers that need to bound thread use.
pub fn basin_scan_seq<const N: usize, F>(
    map: F,
    target: [f64; N],
    cfg: &BasinConfig<N>,
) -> Result<BasinReport<N>>
where
    F: Fn([f64; N]) -> Result<[f64; N]> + Sync,
{
    scan_impl(&map, target, cfg, false)
}

// ---------------------------------------------------------------------------
// fixed-point search
// ---------------------------------------------------------------------------

fn norm_inf<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves `m · x = b` by Gaussian elimination with partial pivoting.
/// Returns None when the matrix is numerically singular.
#[allow(clippy::needless_range_loop)] // in-place elimination reads two rows at once
fn solve_linear<const N: usize>(mut m: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let pivot =
            (col..N).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for c in col..N {
                m[row][c] -= f * m[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for c in row + 1..N {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
        if !x[row].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Residual map `g(s) = map(s) − s`, or None if the map fails or produces a
/// non-finite state.
fn residual<const N: usize, F>(map: &F, s: [f64; N]) -> Option<[f64; N]>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let v = map(s).ok()?;
    let mut g = [0.0; N];
    for i in 0..N {
        if !v[i].is_finite() {
            return None;
        }
        g[i] = v[i] - s[i];
    }
    Some(g)
}

fn fd_jacobian<const N: usize, F>(map: &F, s: [f64; N]) -> Option<[[f64; N]; N]>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let mut j = [[0.0; N]; N];
    for col in 0..N {
        let h = 1e-6 * s[col].abs().max(1.0);
        let mut sp = s;
        let mut sm = s;
        sp[col] += h;
        sm[col] -= h;
        let gp = residual(map, sp)?;
        let gm = residual(map, sm)?;
        for row in 0..N {
            j[row][col] = (gp[row] - gm[row]) / (2.0 * h);
        }
    }
    Some(j)
}

/// Damped Newton iteration on `g(s) = map(s) − s` from `seed`. Returns the
/// refined point and its residual norm when the iteration lands somewhere
/// finite.
fn newton_refine<const N: usize, F>(map: &F, seed: [f64; N]) -> Option<([f64; N], f64)>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let mut s = seed;
    let mut g = residual(map, s)?;
    for _ in 0..200 {
        let r0 = norm_inf(&g);
        if r0 < 1e-13 {
            break;
        }
        let jac = fd_jacobian(map, s)?;
        let mut rhs = [0.0; N];
        for i in 0..N {
            rhs[i] = -g[i];
        }
        let delta = solve_linear(jac, rhs)?;
        // backtracking line search: accept the first step that reduces |g|
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let mut cand = s;
            for i in 0..N {
                cand[i] += lambda * delta[i];
            }
            if let Some(gc) = residual(map, cand) {
                if norm_inf(&gc) < r0 {
                    accepted = Some((cand, gc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (cand, gc) = accepted?;
        let step = lambda * norm_inf(&delta);
        s = cand;
        g = gc;
        if step < 1e-15 * norm_inf(&s).max(1.0) {
            break;
        }
    }
    Some((s, norm_inf(&g)))
}

/// Finds fixed points of `map` inside the box `[lo, hi]`.
///
/// Seeds a `seeds_per_axis^N` grid, refines each seed with damped Newton on
/// `map(s) − s`, and (in one dimension) additionally bisects every
/// sign change of the residual between adjacent seeds. Candidates with
/// residual below 1e−10 are kept, deduplicated (nearby candidates collapse
/// to the one with the smallest residual), and returned sorted
/// lexicographically by coordinates.
pub fn find_fixed_points<const N: usize, F>(
    map: F,
    lo: [f64; N],
    hi: [f64; N],
    seeds_per_axis: usize,
) -> Result<Vec<[f64; N]>>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    if N == 0 {
        return Err(Error::InvalidArgument(
            "box must have at least one axis".into(),
        ));
    }
    for i in 0..N {
        if !lo[i].is_finite() || !hi[i].is_finite() || lo[i] >= hi[i] {
            return Err(Error::InvalidArgument(format!(
                "axis {i}: need finite lo < hi, got [{}, {}]",
                lo[i], hi[i]
            )));
        }
    }
    if seeds_per_axis < 2 {
        return Err(Error::InvalidArgument(format!(
            "seeds_per_axis must be at least 2, got {seeds_per_axis}"
        )));
    }
    let n_seeds = seeds_per_axis
        .checked_pow(N as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("{seeds_per_axis}^{N} overflows")))?;

    let seed_point = |mut idx: usize| -> [f64; N] {
        let mut s = [0.0; N];
        for axis in (0..N).rev() {
            let digit = idx % seeds_per_axis;
            idx /= seeds_per_axis;
            s[axis] = lo[axis] + (hi[axis] - lo[axis]) * digit as f64 / (seeds_per_axis - 1) as f64;
        }
        s
    };

    let mut candidates: Vec<([f64; N], f64)> = Vec::new();
    for idx in 0..n_seeds {
        if let Some((pt, res)) = newton_refine(&map, seed_point(idx)) {
            candidates.push((pt, res));
        }
    }

    // 1-D only: bisection on residual sign changes catches roots where the
    // Newton iteration gets thrown out of the box.
    if N == 1 {
        let g1 = |x: f64| -> Option<f64> { residual(&map, [x; N]).map(|g| g[0]) };
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..n_seeds {
            let x = lo[0] + (hi[0] - lo[0]) * i as f64 / (n_seeds - 1) as f64;
            let Some(gx) = g1(x) else {
                prev = None;
                continue;
            };
            if let Some((xp, gp)) = prev {
                if gp * gx < 0.0 {
                    let (mut a, mut ga, mut b) = (xp, gp, x);
                    for _ in 0..200 {
                        let mid = 0.5 * (a + b);
                        let Some(gm) = g1(mid) else { break };
                        if gm == 0.0 {
                            a = mid;
                            break;
                        }
                        if ga * gm < 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            ga = gm;
                        }
                        if (b - a).abs() < 1e-15 * a.abs().max(1.0) {
                            break;
                        }
                    }
                    let root = 0.5 * (a + b);
                    if let Some(gr) = g1(root) {
                        let mut pt = [0.0; N];
                        pt[0] = root;
                        candidates.push((pt, gr.abs()));
                    }
                }
            }
            prev = Some((x, gx));
        }
    }

    // keep accurate, in-box candidates; collapse clusters to the best member
    let mut slack = [0.0; N];
    for i in 0..N {
        slack[i] = 1e-9 * (hi[i] - lo[i]);
    }
    let in_box =
        |p: &[f64; N]| (0..N).all(|i| p[i] >= lo[i] - slack[i] && p[i] <= hi[i] + slack[i]);
    let mut accurate: Vec<([f64; N], f64)> = candidates
        .into_iter()
        .filter(|(p, r)| *r < 1e-10 && in_box(p))
        .collect();
    accurate.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut kept: Vec<[f64; N]> = Vec::new();
    'cand: for (p, _) in accurate {
        for q in &kept {
            let close = (0..N).all(|i| (p[i] - q[i]).abs() < 1e-6 * (hi[i] - lo[i]).max(1.0));
            if close {
                continue 'cand;
            }
        }
        kept.push(p);
    }
    kept.sort_by(|a, b| {
        for i in 0..N {
            match a[i].partial_cmp(&b[i]).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(kept)
}

// ---------------------------------------------------------------------------
// quintic benchmark map
// ---------------------------------------------------------------------------

/// Parameters of the 1-D polynomial map
/// `f(x) = s²·x·(1−x)·(1 − s·x + s·x²)`.
///
/// Its fixed points are 0, `(s−1)/s`, and (for `s ≥ 3`) the pair
/// `(1 + s ∓ √((s−1)² − 4)) / (2s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyMapParams {
    s: f64,
}

impl PolyMapParams {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::param(
                "s",
                format!("must be finite and > 0, got {s}"),
            ));
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// One application of the polynomial map. Errors on non-finite input;
/// overflow on extreme inputs yields a non-finite output that basin scans
/// classify as escaped.
pub fn step_poly(p: &PolyMapParams, x: f64) -> Result<f64> {
    crate::error::ensure_finite("state x", x)?;
    let s = p.s;
    Ok(s * s * x * (1.0 - x) * (1.0 - s * x + s * x * x))
}

/// Closed-form fixed points of the polynomial map inside ℝ, sorted
/// ascending: 0, `(s−1)/s`, and when `(s−1)² ≥ 4` the quadratic pair.
pub fn poly_fixed_points(p: &PolyMapParams) -> Vec<f64> {
    let s = p.s;
    let mut pts = vec![0.0, (s - 1.0) / s];
    let disc = (s - 1.0) * (s - 1.0) - 4.0;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        pts.push((1.0 + s - sq) / (2.0 * s));
        pts.push((1.0 + s + sq) / (2.0 * s));
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{step_pair, step_single, PairParams, PairState, SingleParams};

    fn single_map(p: SingleParams) -> impl Fn([f64; 1]) -> Result<[f64; 1]> + Sync {
        move |s| step_single(&p, s[0]).map(|v| [v])
    }

    fn pair_map(p: PairParams) -> impl Fn([f64; 2]) -> Result<[f64; 2]> + Sync {
        move |s| step_pair(&p, PairState::new(s[0], s[1])).map(|v| [v.x, v.y])
    }

    #[test]
    fn poly_fixed_points_match_known_values() {
        let p = PolyMapParams::new(3.1).unwrap();
        let pts = poly_fixed_points(&p);
        assert_eq!(pts.len(), 4);
        assert!((pts[0] - 0.0).abs() < 1e-15);
        assert!((pts[1] - 0.558_014).abs() < 1e-5);
        assert!((pts[2] - 2.1 / 3.1).abs() < 1e-12);
        assert!((pts[3] - 0.764_566).abs() < 1e-5);
        // each really is fixed
        for &x in &pts {
            let fx = step_poly(&p, x).unwrap();
            assert!((fx - x).abs() < 1e-12, "x = {x} maps to {fx}");
        }
    }

    #[test]
    fn finder_recovers_poly_fixed_points() {
        let p = PolyMapParams::new(3.1).unwrap();
        let map = move |s: [f64; 1]| step_poly(&p, s[0]).map(|v| [v]);
        let found = find_fixed_points(map, [-0.1], [1.1], 41).unwrap();
        let expect = poly_fixed_points(&p);
        assert_eq!(found.len(), expect.len(), "found {found:?}");
        for (f, e) in found.iter().zip(expect.iter()) {
            assert!((f[0] - e).abs() < 1e-9, "found {} vs expected {e}", f[0]);
        }
    }

    #[test]
    fn finder_recovers_single_species_points() {
        let p = SingleParams::new(1.999, 0.8).unwrap();
        let found = find_fixed_points(single_map(p), [-0.5], [3.0], 31).unwrap();
        assert_eq!(found.len(), 2, "found {found:?}");
        assert!(found[0][0].abs() < 1e-10);
        assert!((found[1][0] - 0.222_143_05).abs() < 1e-6);
    }

    #[test]
    fn finder_recovers_all_three_pair_points() {
        let p = PairParams::new(5.0, 2.0, 0.1, 0.61, 3.0).unwrap();
        let found = find_fixed_points(pair_map(p), [-0.2, -0.2], [2.0, 3.0], 15).unwrap();
        let expect = [
            [0.0, 0.0],
            [(4.0f64 / 2.0).ln(), 0.0],
            [0.536_666_666_666_666_6, 1.310_700],
        ];
        for e in expect {
            let hit = found
                .iter()
                .any(|f| (f[0] - e[0]).abs() < 1e-4 && (f[1] - e[1]).abs() < 1e-4);
            assert!(hit, "missing fixed point near {e:?}; found {found:?}");
        }
        // and nothing spurious
        assert_eq!(found.len(), 3, "found {found:?}");
    }

    #[test]
    fn scan_confirms_single_species_sink() {
        let p = SingleParams::new(1.999, 0.8).unwrap();
        let target = crate::stability::single_positive_equilibrium(&p).unwrap();
        let mut cfg = BasinConfig::new([0.02], [2.0]).unwrap();
        cfg.grid = 64;
        let report = basin_scan(single_map(p), [target], &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.samples.len(), 64 + 1);
        assert_eq!(report.planted_index, 64);
        assert_eq!(report.samples[64].outcome, Outcome::Converged);
        assert!(report.n_converged > 0);
    }

    #[test]
    fn scan_refutes_convergence_to_a_repelling_point() {
        let p = PolyMapParams::new(3.1).unwrap();
        let pts = poly_fixed_points(&p);
        let target = pts[1]; // repelling interior point
        let mut cfg = BasinConfig::new([0.0], [1.0]).unwrap();
        cfg.grid = 101;
        cfg.burn_in = 400;
        let map = move |s: [f64; 1]| step_poly(&p, s[0]).map(|v| [v]);
        let report = basin_scan(map, [target], &cfg).unwrap();
        match report.verdict {
            Verdict::Refuted { witness } => {
                assert!(witness[0] > 0.0 && witness[0] < 1.0);
                let rec = report
                    .samples
                    .iter()
                    .find(|r| r.start == witness)
                    .expect("witness is one of the samples");
                assert!(rec.interior);
                assert_ne!(rec.outcome, Outcome::Converged);
            }
            v => panic!("expected refutation, got {v:?}"),
        }
    }

    #[test]
    fn scan_rejects_non_fixed_target() {
        let p = PolyMapParams::new(3.1).unwrap();
        let map = move |s: [f64; 1]| step_poly(&p, s[0]).map(|v| [v]);
        let cfg = BasinConfig::new([0.0], [1.0]).unwrap();
        let err = basin_scan(map, [0.3], &cfg).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
    }

    #[test]
    fn escaping_orbits_are_classified_and_witnessed() {
        // doubling map: only fixed point is 0, everything else escapes
        let map = |s: [f64; 1]| Ok([2.0 * s[0]]);
        let mut cfg = BasinConfig::new([0.5], [1.0]).unwrap();
        cfg.grid = 8;
        cfg.burn_in = 100;
        let report = basin_scan(map, [0.0], &cfg).unwrap();
        assert!(matches!(report.verdict, Verdict::Refuted { .. }));
        assert!(report.n_escaped > 0);
        let esc = report
            .samples
            .iter()
            .find(|r| r.outcome == Outcome::Escaped)
            .unwrap();
        assert!(esc.iters > 10 && esc.iters < 40, "iters = {}", esc.iters);
    }

    #[test]
    fn pair_scan_is_consistent_for_coexistence_sink() {
        let p = PairParams::new(5.0, 2.0, 0.1, 0.61, 3.0).unwrap();
        let eq = crate::stability::interior_equilibrium(&p).unwrap();
        let mut cfg = BasinConfig::new([0.3, 1.0], [0.8, 1.8]).unwrap();
        cfg.grid = 12;
        cfg.burn_in = 3000;
        let report = basin_scan(pair_map(p), [eq.x, eq.y], &cfg).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::Consistent,
            "n_other = {}",
            report.n_other
        );
    }

    #[test]
    fn grid_order_is_row_major_with_endpoints() {
        let mut cfg = BasinConfig::new([0.0, 10.0], [1.0, 20.0]).unwrap();
        cfg.grid = 3;
        assert_eq!(cfg.grid_point(0), [0.0, 10.0]);
        assert_eq!(cfg.grid_point(1), [0.0, 15.0]);
        assert_eq!(cfg.grid_point(2), [0.0, 20.0]);
        assert_eq!(cfg.grid_point(3), [0.5, 10.0]);
        assert_eq!(cfg.grid_point(8), [1.0, 20.0]);
    }

    #[test]
    fn parallel_and_sequential_scans_agree_bitwise() {
        let p = PolyMapParams::new(3.1).unwrap();
        let pts = poly_fixed_points(&p);
        let mut cfg = BasinConfig::new([0.0], [1.0]).unwrap();
        cfg.grid = 33;
        cfg.burn_in = 200;
        let map = move |s: [f64; 1]| step_poly(&p, s[0]).map(|v| [v]);
        let a = basin_scan(map, [pts[1]], &cfg).unwrap();
        let b = basin_scan_seq(map, [pts[1]], &cfg).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.samples, b.samples);
        assert_eq!(
            (a.n_converged, a.n_other, a.n_escaped),
            (b.n_converged, b.n_other, b.n_escaped)
        );
    }

    #[test]
    fn config_validation_rejects_bad_boxes() {
        assert!(BasinConfig::new([1.0], [1.0]).is_err());
        assert!(BasinConfig::new([f64::NAN], [1.0]).is_err());
        let mut cfg = BasinConfig::new([0.0], [1.0]).unwrap();
        cfg.grid = 1;
        assert!(matches!(
            basin_scan(|s: [f64; 1]| Ok(s), [0.5], &cfg),
            Err(Error::InvalidArgument(_))
        ));
    }
}
