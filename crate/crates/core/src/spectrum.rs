//! Bound-state energies as roots of the matching determinant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{energy_floor, RingParams};
use crate::radial::{self, gammas, solve_coefficients, RadialSolution};
use crate::roots::{brent, golden_min};
use crate::specfun::gamma::is_nonpositive_integer;

/// Dips of |D| accepted as (near-)double roots.
const DIP_ACCEPT: f64 = 1e-8;
/// A local minimum of |D| this much below both neighbours is inspected.
const DIP_RATIO: f64 = 0.5;
const DIP_DEPTH: usize = 6;
/// Half-width, in γi, of the averaging window around a degenerate basis.
const LANDAU_EPS: f64 = 2e-9;
const MAX_STEP: f64 = 0.5;

/// One bound level at fixed angular momentum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub m: i32,
    /// Radial index, 1 for the lowest root.
    pub n: usize,
    pub e0: f64,
    /// Overlap δ, filled in by the Zeeman step.
    pub delta: Option<f64>,
    /// Zeeman correction e′, filled in by the Zeeman step.
    pub e_prime: Option<f64>,
    pub solution: RadialSolution,
}

/// Determinant samples used for bracketing, ordered by energy.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DetProfile {
    pub grid: Vec<(f64, f64)>,
}

/// Scaled matching determinant at `e0`.
///
/// This is det M₄ with unit-norm rows, divided by the likewise scaled
/// Wronskian of the region-2 pair (M(γi), U(γi)) at r_i. The division
/// removes the spurious zeros det M₄ has wherever U(γi) degenerates into a
/// multiple of M(γi) (γi = 0, -1, -2, ...), leaving a quantity whose zeros
/// are exactly the bound states. The value is the sine of the angle between
/// the inner and outer solutions' (u, u') vectors at r = 1, so it lies in
/// [-1, 1]. For a dot (r_i < 10⁻⁸) the reduced 2×2 system at r = 1 is used.
pub fn matching_determinant(params: &RingParams, e0: f64) -> Result<f64> {
    params.validate()?;
    let (_, gi) = gammas(params, e0);
    let near = gi.round();
    if !params.is_dot() && near <= 0.0 && (gi - near).abs() < LANDAU_EPS {
        let h = 4.0 * params.b * 2.0 * LANDAU_EPS;
        let lo = raw_determinant(params, e0 - h)?;
        let hi = raw_determinant(params, e0 + h)?;
        return Ok(0.5 * (lo + hi));
    }
    raw_determinant(params, e0)
}

fn raw_determinant(params: &RingParams, e0: f64) -> Result<f64> {
    let m = radial::matching(params, e0)?;
    Ok(radial::scaled_mismatch(&m))
}

/// Local classical period ∫ dr / √(E - V(r)) over the allowed region. In
/// s = r² each region's integrand is 1/(2√(quadratic)), integrable in
/// closed form.
fn classical_period(p: &RingParams, e: f64) -> f64 {
    let m = p.m as f64;
    let b = p.b;
    let e_eff = e + p.a * p.a - 2.0 * b * m;
    let piece = |c: f64, r_lo: f64, r_hi: f64| -> f64 {
        // -b² s² + (E - c) s - m²  under the root
        let bq = e_eff - c;
        let disc = bq * bq - 4.0 * b * b * m * m;
        if disc <= 0.0 || bq <= 0.0 {
            return 0.0;
        }
        let sq = disc.sqrt();
        let s_lo = (r_lo * r_lo).max((bq - sq) / (2.0 * b * b));
        let s_hi = (r_hi * r_hi).min((bq + sq) / (2.0 * b * b));
        if s_hi <= s_lo {
            return 0.0;
        }
        let f = |s: f64| ((2.0 * b * b * s - bq) / sq).clamp(-1.0, 1.0).asin();
        (f(s_hi) - f(s_lo)) / (2.0 * b)
    };
    let mut t = piece(0.0, p.r_i, 1.0) + piece(p.v, 1.0, f64::INFINITY);
    if p.r_i > 0.0 {
        t += piece(p.v, 0.0, p.r_i);
    }
    t
}

/// Scan step: an eighth of the semiclassical level spacing 2π/T, clamped to
/// [min(b, 1/2), 1/2]. The spacing is also taken one step ahead, so a
/// classically allowed well that opens inside the step is not jumped over.
fn scan_step(p: &RingParams, e: f64) -> f64 {
    let local = |e: f64| {
        let t = classical_period(p, e);
        if t <= 0.0 {
            return MAX_STEP;
        }
        (2.0 * std::f64::consts::PI / t / 8.0).clamp(p.b.min(MAX_STEP), MAX_STEP)
    };
    let here = local(e);
    here.min(local(e + here))
}

/// Default search ceiling v + 8b(n + |m| + 1).
pub fn default_ceiling(p: &RingParams, n_levels: usize) -> f64 {
    p.v + 8.0 * p.b * (n_levels as f64 + p.m.unsigned_abs() as f64 + 1.0)
}

struct Scanner<'a> {
    params: &'a RingParams,
    profile: DetProfile,
    roots: Vec<f64>,
}

impl Scanner<'_> {
    fn det(&mut self, e: f64) -> Result<f64> {
        let d = matching_determinant(self.params, e)?;
        self.profile.grid.push((e, d));
        Ok(d)
    }

    fn refine(&mut self, lo: f64, hi: f64, dlo: f64, dhi: f64) -> Result<()> {
        let p = self.params;
        let xtol = 1e-13 * lo.abs().max(1.0);
        let root = brent(|e| matching_determinant(p, e), lo, hi, dlo, dhi, xtol)?;
        self.roots.push(root);
        Ok(())
    }

    /// Looks for a root pair hidden between samples of equal sign.
    fn inspect_dip(&mut self, lo: f64, hi: f64, dlo: f64, dhi: f64, depth: usize) -> Result<bool> {
        let n = 4;
        let mut prev = (lo, dlo);
        let mut pts = vec![prev];
        let mut found = false;
        for k in 1..=n {
            let e = lo + (hi - lo) * k as f64 / n as f64;
            let d = if k == n { dhi } else { self.det(e)? };
            if d.signum() != prev.1.signum() {
                self.refine(prev.0, e, prev.1, d)?;
                found = true;
            }
            prev = (e, d);
            pts.push(prev);
        }
        if found {
            return Ok(true);
        }
        if depth == 0 {
            let p = self.params;
            let (e, v) = golden_min(
                |e| Ok(matching_determinant(p, e)?.abs()),
                lo,
                hi,
                1e-12 * lo.abs().max(1.0),
            )?;
            if v < DIP_ACCEPT {
                self.roots.push(e);
                self.roots.push(e);
                return Ok(true);
            }
            return Ok(false);
        }
        // Recurse into the sub-interval around the smallest |D|.
        let (k, _) = pts
            .iter()
            .enumerate()
            .skip(1)
            .take(n - 1)
            .min_by(|a, b| a.1 .1.abs().total_cmp(&b.1 .1.abs()))
            .expect("interior samples");
        let (a, b) = (pts[k - 1], pts[k + 1]);
        self.inspect_dip(a.0, b.0, a.1, b.1, depth - 1)
    }
}

/// Lowest `n_levels` bound states with angular momentum `params.m`.
///
/// Scans upward from the effective-potential floor with a step tied to the
/// semiclassical level spacing, brackets sign changes of the scaled
/// determinant, inspects pronounced dips of |D| for root pairs, and refines
/// every root with Brent's method.
pub fn find_levels(params: &RingParams, n_levels: usize, search_ceiling: f64) -> Result<Vec<EnergyLevel>> {
    let (roots, _) = scan_roots(params, n_levels, search_ceiling)?;
    let mut levels = Vec::with_capacity(roots.len());
    for (i, &e0) in roots.iter().enumerate() {
        levels.push(EnergyLevel {
            m: params.m,
            n: i + 1,
            e0,
            delta: None,
            e_prime: None,
            solution: solve_coefficients(params, e0)?,
        });
    }
    if levels.len() < n_levels {
        return Err(Error::PartialLevels {
            requested: n_levels,
            ceiling: search_ceiling,
            found: levels,
        });
    }
    Ok(levels)
}

/// Determinant roots only (no wavefunctions), with the sampled profile.
pub fn scan_roots(params: &RingParams, n_levels: usize, search_ceiling: f64) -> Result<(Vec<f64>, DetProfile)> {
    params.validate()?;
    if n_levels == 0 {
        return Err(Error::Domain("n_levels must be at least 1".into()));
    }
    let floor = energy_floor(params);
    let mut sc = Scanner {
        params,
        profile: DetProfile::default(),
        roots: Vec::new(),
    };
    let mut e = floor + 1e-9 * floor.abs().max(1.0);
    let mut d = sc.det(e)?;
    let mut before: Option<(f64, f64)> = None;
    while e < search_ceiling && sc.roots.len() < n_levels {
        let next = (e + scan_step(params, e)).min(search_ceiling);
        let dn = sc.det(next)?;
        if dn.signum() != d.signum() {
            sc.refine(e, next, d, dn)?;
        } else if let Some((eb, db)) = before {
            if db.signum() == d.signum() && d.abs() < DIP_RATIO * db.abs().min(dn.abs()) {
                sc.inspect_dip(eb, next, db, dn, DIP_DEPTH)?;
            }
        }
        before = Some((e, d));
        e = next;
        d = dn;
    }
    let mut roots = sc.roots;
    roots.sort_by(f64::total_cmp);
    roots.truncate(n_levels);
    let mut profile = sc.profile;
    profile.grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    profile.grid.dedup_by(|a, b| a.0 == b.0);
    Ok((roots, profile))
}

/// Residuals of the two exact relations for one radial index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationResidual {
    pub n: usize,
    /// e₀(m, a) - [e₀(m, 0) - a²]
    pub a_shift: f64,
    /// [e₀(m) - e₀(-m)] - 4bm
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub residuals: Vec<RelationResidual>,
}

impl RelationReport {
    pub fn max_abs(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.a_shift.abs().max(r.spacing.abs()))
            .fold(0.0, f64::max)
    }
}

/// Checks the a²-shift and ±m spacing relations on levels computed for +m
/// and -m at otherwise identical parameters. The a = 0 reference levels are
/// computed here.
pub fn verify_relations(
    params: &RingParams,
    levels_pos: &[EnergyLevel],
    levels_neg: &[EnergyLevel],
) -> Result<RelationReport> {
    let n = levels_pos.len().min(levels_neg.len());
    let zero_a = params.with_a(0.0);
    let ceiling = default_ceiling(&zero_a, n).max(levels_pos.last().map_or(0.0, |l| l.e0 + params.a * params.a + 1.0));
    let (reference, _) = scan_roots(&zero_a, n.max(1), ceiling)?;
    let m = params.m as f64;
    let residuals = (0..n)
        .map(|i| RelationResidual {
            n: i + 1,
            a_shift: reference
                .get(i)
                .map_or(f64::NAN, |r| levels_pos[i].e0 - (r - params.a * params.a)),
            spacing: (levels_pos[i].e0 - levels_neg[i].e0) - 4.0 * params.b * m,
        })
        .collect();
    Ok(RelationReport { residuals })
}

/// True when the region-2 basis is degenerate at `e0` (γi ∈ {0, -1, ...}).
pub fn basis_degenerate(params: &RingParams, e0: f64) -> bool {
    is_nonpositive_integer(gammas(params, e0).1)
}
