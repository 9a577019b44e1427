//! Decomposition of the regular set into sign-vector components,
//! classification of each component against the negative cone, and the
//! convergence certificate built from the vertex-only components.
//!
//! Feasibility of a sign vector is decided exactly (rational LP on the
//! slab where every pairing is at least 1). The quadratic classification
//! is nonconvex, so it combines exact negative witnesses, multi-start
//! interior descent, and sampled validation; a certificate is labeled
//! numerical unless an exact rational witness settles the class.

use crate::error::{Error, Result};
use crate::exec;
use crate::incidence::{check_all, ConeConfig};
use crate::matrix::RatVec;
use crate::quadform::{build_majorant, MajorantForm};
use crate::rat::{rat, to_f64, Rat};
use crate::signwalk::{evaluate_w, phi, reference_weight};
use crate::simplex::{slab_vertex, strict_cone_witness};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const OPT_TOLERANCE: f64 = 1e-8;
pub const CLASS_DEAD_BAND: f64 = 1e-6;
pub const VALIDATION_TOLERANCE: f64 = 1e-6;
const VALIDATION_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureClass {
    /// The open cone contains negative vectors.
    MeetsNegative,
    /// The closure touches the null cone but the open cone stays
    /// nonnegative (infimum 0 within the dead band).
    BoundaryTouch,
    /// The closure meets the closed negative cone only at the origin;
    /// these components carry the positive infimum of the norm ratio.
    VertexOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignComponent {
    pub signs: Vec<i8>,
    #[serde(skip)]
    pub witness: RatVec,
    pub meets_negative: bool,
    pub closure_class: ClosureClass,
    pub w_value: i64,
    /// Numerical infimum of (x,x)/majorant(x,x) over the component.
    pub inf_ratio: f64,
    /// True when the class is settled by an exact rational witness.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentAtlas {
    pub components: Vec<SignComponent>,
    /// False when the sign-vector space exceeded the budget and only a
    /// randomized realization search ran.
    pub complete: bool,
}

/// All realizable full-sign vectors with witnesses, classified. Works
/// for valid and invalid configurations alike.
pub fn enumerate_components(config: &ConeConfig, budget: u64) -> Result<ComponentAtlas> {
    let n = config.len();
    let majorant = build_majorant(config.space())?;
    let exhaustive = n < 63 && (1u64 << (n - 1)) <= budget;
    let half: Vec<Vec<i8>> = if exhaustive {
        // Antipodal pairs: fix the first sign to +1 and mirror later.
        (0..(1u64 << (n - 1)))
            .map(|mask| {
                let mut s = vec![1i8; n];
                for (bit, slot) in s.iter_mut().skip(1).enumerate() {
                    if mask >> bit & 1 == 1 {
                        *slot = -1;
                    }
                }
                s
            })
            .collect()
    } else {
        randomized_sign_vectors(config, budget)
    };

    let found = exec::map_slice(&half, |signs| {
        let rows: Vec<RatVec> = (0..n)
            .map(|j| {
                config
                    .pairing_row(j)
                    .iter()
                    .map(|v| if signs[j] > 0 { v.clone() } else { -v })
                    .collect()
            })
            .collect();
        strict_cone_witness(&rows).map(|witness| (signs.clone(), witness))
    });

    let mut components = Vec::new();
    for (signs, witness) in found.into_iter().flatten() {
        let anti_signs: Vec<i8> = signs.iter().map(|s| -s).collect();
        let anti_witness: RatVec = witness.iter().map(|v| -v).collect();
        components.push(classify_realized(config, &majorant, signs, witness)?);
        components.push(classify_realized(config, &majorant, anti_signs, anti_witness)?);
    }
    components.sort_by(|a, b| a.signs.cmp(&b.signs));
    components.dedup_by(|a, b| a.signs == b.signs);
    Ok(ComponentAtlas { components, complete: exhaustive })
}

fn randomized_sign_vectors(config: &ConeConfig, budget: u64) -> Vec<Vec<i8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    let dim = config.dim();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..budget.min(200_000) {
        let x: RatVec = (0..dim).map(|_| rat(rng.gen_range(-1000..=1000), 1000)).collect();
        let signs: Vec<i8> = (0..config.len())
            .map(|j| crate::rat::sign(&config.pairing(&x, j)) as i8)
            .collect();
        if signs.iter().all(|&s| s != 0) && signs[0] > 0 {
            seen.insert(signs);
        }
    }
    seen.into_iter().collect()
}

fn classify_realized(
    config: &ConeConfig,
    majorant: &MajorantForm,
    signs: Vec<i8>,
    witness: RatVec,
) -> Result<SignComponent> {
    let c = classify_component(config, majorant, &signs, &witness)?;
    let w_value = evaluate_w(config, &witness);
    Ok(SignComponent {
        meets_negative: c.class == ClosureClass::MeetsNegative,
        closure_class: c.class,
        w_value,
        inf_ratio: c.inf_ratio,
        exact: c.exact,
        signs,
        witness,
    })
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: ClosureClass,
    /// Best known value of inf (x,x)/majorant(x,x) over the component.
    pub inf_ratio: f64,
    pub exact: bool,
}

/// Classifies one realizable component. Exact fast paths first (negative
/// witness, negative vertex or conic combination), then multi-start
/// barrier descent on the degree-0 homogeneous norm ratio.
pub fn classify_component(
    config: &ConeConfig,
    majorant: &MajorantForm,
    signs: &[i8],
    witness: &RatVec,
) -> Result<Classification> {
    let space = config.space();
    let rows: Vec<RatVec> = (0..config.len())
        .map(|j| {
            config
                .pairing_row(j)
                .iter()
                .map(|v| if signs[j] > 0 { v.clone() } else { -v })
                .collect()
        })
        .collect();

    let mut points: Vec<RatVec> = vec![witness.clone()];
    let d = space.dim();
    for k in 0..d {
        for sgn in [1i64, -1] {
            let mut obj = vec![Rat::zero(); d];
            obj[k] = Rat::from_integer(sgn.into());
            if let Some(v) = slab_vertex(&rows, &obj, 100) {
                points.push(v);
            }
        }
    }

    // Exact route: any collected cone point of negative norm settles it.
    for p in &points {
        if space.norm(p)?.is_negative() {
            return Ok(Classification {
                class: ClosureClass::MeetsNegative,
                inf_ratio: ratio_exact(space, majorant, p)?,
                exact: true,
            });
        }
    }
    // Exact conic combinations of the harvested points stay in the cone.
    let mut rng = ChaCha8Rng::seed_from_u64(0xCAFE);
    for _ in 0..200 {
        let combo = random_combo_exact(&points, &mut rng);
        if space.norm(&combo)?.is_negative() {
            return Ok(Classification {
                class: ClosureClass::MeetsNegative,
                inf_ratio: ratio_exact(space, majorant, &combo)?,
                exact: true,
            });
        }
    }

    // Numerical route: multi-start interior descent of the ratio.
    let gf = to_f64_mat(space.gram());
    let mf = to_f64_mat(&majorant.gram_pos);
    let rows_f: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(to_f64).collect())
        .collect();
    let mut best = f64::INFINITY;
    for start in &points {
        let x0: Vec<f64> = start.iter().map(to_f64).collect();
        if let Some(v) = descend_ratio(&gf, &mf, &rows_f, &x0) {
            best = best.min(v);
        }
    }
    if !best.is_finite() {
        return Err(Error::Optimizer(
            "ratio descent failed from every start point".into(),
        ));
    }
    // An exact null vertex confirms a boundary touch.
    let exact_null = points.iter().any(|p| space.norm(p).map(|q| q.is_zero()).unwrap_or(false));
    let class = if best < -CLASS_DEAD_BAND {
        ClosureClass::MeetsNegative
    } else if best.abs() <= CLASS_DEAD_BAND || exact_null {
        ClosureClass::BoundaryTouch
    } else {
        ClosureClass::VertexOnly
    };
    Ok(Classification { class, inf_ratio: best, exact: exact_null && class == ClosureClass::BoundaryTouch })
}

fn ratio_exact(
    space: &crate::quadform::QuadraticSpace,
    majorant: &MajorantForm,
    x: &[Rat],
) -> Result<f64> {
    let q = space.norm(x)?;
    let m = majorant.norm(x)?;
    Ok(to_f64(&q) / to_f64(&m))
}

fn random_combo_exact(points: &[RatVec], rng: &mut ChaCha8Rng) -> RatVec {
    let d = points[0].len();
    let mut out = vec![Rat::zero(); d];
    for p in points {
        let w = rat(rng.gen_range(0..=20), 20);
        for (o, v) in out.iter_mut().zip(p) {
            *o += v * &w;
        }
    }
    out
}

fn to_f64_mat(m: &crate::matrix::RatMat) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(to_f64).collect())
        .collect()
}

fn quad(m: &[Vec<f64>], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for (row, &xi) in m.iter().zip(x) {
        let mut t = 0.0;
        for (a, &xj) in row.iter().zip(x) {
            t += a * xj;
        }
        s += xi * t;
    }
    s
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Barrier descent of f(x) = (x,x)/majorant(x,x) over the open cone
/// rows.x > 0, with the iterate kept on the majorant unit sphere.
fn descend_ratio(
    gf: &[Vec<f64>],
    mf: &[Vec<f64>],
    rows: &[Vec<f64>],
    start: &[f64],
) -> Option<f64> {
    let normalize = |x: &[f64]| -> Option<Vec<f64>> {
        let m = quad(mf, x);
        if m <= 0.0 || !m.is_finite() {
            return None;
        }
        let s = m.sqrt();
        Some(x.iter().map(|v| v / s).collect())
    };
    let feasible = |x: &[f64]| rows.iter().all(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() > 0.0);

    let mut x = normalize(start)?;
    if !feasible(&x) {
        return None;
    }
    for &mu in &[1e-2, 1e-4, 1e-6, 1e-8] {
        for _ in 0..200 {
            let mq = quad(mf, &x);
            let f = quad(gf, &x) / mq;
            let gx = mat_vec(gf, &x);
            let mx = mat_vec(mf, &x);
            let mut grad: Vec<f64> = gx
                .iter()
                .zip(&mx)
                .map(|(g, m)| 2.0 * (g - f * m) / mq)
                .collect();
            for r in rows {
                let g: f64 = r.iter().zip(&x).map(|(a, b)| a * b).sum();
                for (gr, &rc) in grad.iter_mut().zip(r) {
                    *gr -= mu * rc / g;
                }
            }
            let gnorm: f64 = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm < OPT_TOLERANCE {
                break;
            }
            let h0 = barrier_value(gf, mf, rows, &x, mu)?;
            let mut step = 0.5;
            let mut improved = false;
            for _ in 0..40 {
                let cand: Vec<f64> =
                    x.iter().zip(&grad).map(|(v, g)| v - step * g / gnorm.max(1.0)).collect();
                if let Some(c) = normalize(&cand) {
                    if feasible(&c) {
                        if let Some(h) = barrier_value(gf, mf, rows, &c, mu) {
                            if h < h0 - 1e-14 {
                                x = c;
                                improved = true;
                                break;
                            }
                        }
                    }
                }
                step *= 0.5;
            }
            if !improved {
                break;
            }
        }
    }
    Some(quad(gf, &x) / quad(mf, &x))
}

fn barrier_value(
    gf: &[Vec<f64>],
    mf: &[Vec<f64>],
    rows: &[Vec<f64>],
    x: &[f64],
    mu: f64,
) -> Option<f64> {
    let f = quad(gf, x) / quad(mf, x);
    let mut b = 0.0;
    for r in rows {
        let g: f64 = r.iter().zip(x).map(|(a, b)| a * b).sum();
        if g <= 0.0 {
            return None;
        }
        b += g.ln();
    }
    let v = f - mu * b;
    v.is_finite().then_some(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationStats {
    pub samples_per_cone: usize,
    pub min_margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceCertificate {
    pub vertex_only: Vec<SignComponent>,
    pub per_cone_inf: Vec<f64>,
    /// None is the +infinity sentinel: no vertex-only cone exists and
    /// the summand weight vanishes on all regular vectors.
    pub r_inf: Option<f64>,
    pub method: String,
    pub tolerance: f64,
    pub validation: ValidationStats,
    /// Minimum of (x,x)/majorant(x,x) over lattice points in a small box
    /// where the summand weight is nonzero; covers support on degenerate
    /// strata that the cone decomposition does not see.
    pub empirical_support_ratio: Option<f64>,
}

impl ConvergenceCertificate {
    /// Ratio usable for tail bounds: the certified cone infimum combined
    /// with the observed support bound.
    pub fn effective_ratio(&self) -> Option<f64> {
        match (self.r_inf, self.empirical_support_ratio) {
            (Some(r), Some(e)) => Some(r.min(e)),
            (Some(r), None) => Some(r),
            (None, Some(e)) => Some(e),
            (None, None) => None,
        }
    }
}

const SUPPORT_SCAN_RADIUS: i64 = 6;

/// Convergence certificate for a configuration passing the incidence
/// check: per-cone infima over the vertex-only components, their
/// minimum, and sampled validation.
pub fn compute_r_inf(config: &ConeConfig) -> Result<ConvergenceCertificate> {
    if !check_all(config).overall {
        return Err(Error::Precondition(
            "convergence certificate requires a configuration passing the incidence check".into(),
        ));
    }
    let majorant = build_majorant(config.space())?;
    let atlas = enumerate_components(config, 1 << 20)?;
    let vertex_only: Vec<SignComponent> = atlas
        .components
        .into_iter()
        .filter(|c| c.closure_class == ClosureClass::VertexOnly)
        .collect();

    let mut per_cone_inf: Vec<f64> = Vec::new();
    let mut min_margin = f64::INFINITY;
    let preliminary: Option<f64> =
        vertex_only.iter().map(|c| c.inf_ratio).fold(None, |a, v| {
            Some(a.map_or(v, |x: f64| x.min(v)))
        });

    // Sampled validation; the reported per-cone value also absorbs any
    // smaller sampled ratio so the certificate never overstates.
    for comp in &vertex_only {
        let (sampled_min, margin) =
            validate_cone(config, &majorant, comp, preliminary.unwrap_or(f64::INFINITY))?;
        per_cone_inf.push(comp.inf_ratio.min(sampled_min));
        min_margin = min_margin.min(margin);
    }
    let r_inf = per_cone_inf.iter().cloned().fold(None, |a: Option<f64>, v| {
        Some(a.map_or(v, |x| x.min(v)))
    });

    let empirical_support_ratio = empirical_support_bound(config, &majorant)?;

    let passed = vertex_only.is_empty() || min_margin >= 0.0;
    Ok(ConvergenceCertificate {
        vertex_only,
        per_cone_inf,
        r_inf,
        method: "multi-start barrier descent on the majorant sphere, exact LP witnesses, \
                 sampled conic validation"
            .into(),
        tolerance: VALIDATION_TOLERANCE,
        validation: ValidationStats {
            samples_per_cone: VALIDATION_SAMPLES,
            min_margin: if min_margin.is_finite() { min_margin } else { 0.0 },
            passed,
        },
        empirical_support_ratio,
    })
}

/// Samples conic combinations of the component's harvested points and
/// returns (minimum sampled ratio, minimum of ratio - (r_inf - tol)).
fn validate_cone(
    config: &ConeConfig,
    majorant: &MajorantForm,
    comp: &SignComponent,
    r_inf: f64,
) -> Result<(f64, f64)> {
    let space = config.space();
    let rows: Vec<RatVec> = (0..config.len())
        .map(|j| {
            config
                .pairing_row(j)
                .iter()
                .map(|v| if comp.signs[j] > 0 { v.clone() } else { -v })
                .collect()
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![comp.witness.iter().map(to_f64).collect()];
    let d = space.dim();
    for k in 0..d {
        for sgn in [1i64, -1] {
            let mut obj = vec![Rat::zero(); d];
            obj[k] = Rat::from_integer(sgn.into());
            if let Some(v) = slab_vertex(&rows, &obj, 100) {
                points.push(v.iter().map(to_f64).collect());
            }
        }
    }
    let gf = to_f64_mat(space.gram());
    let mf = to_f64_mat(&majorant.gram_pos);
    let ratios = exec::map_indexed(VALIDATION_SAMPLES, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF ^ i as u64);
        let mut x = vec![0.0f64; d];
        for p in &points {
            let w: f64 = rng.gen_range(0.0..1.0);
            for (xo, &pv) in x.iter_mut().zip(p) {
                *xo += w * pv;
            }
        }
        quad(&gf, &x) / quad(&mf, &x)
    });
    let sampled_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let margin = if r_inf.is_finite() {
        sampled_min - (r_inf - VALIDATION_TOLERANCE)
    } else {
        f64::INFINITY
    };
    Ok((sampled_min, margin))
}

fn empirical_support_bound(
    config: &ConeConfig,
    majorant: &MajorantForm,
) -> Result<Option<f64>> {
    let reference = reference_weight(config)?;
    let dim = config.dim();
    let mut best: Option<f64> = None;
    let r = SUPPORT_SCAN_RADIUS;
    let mut idx = vec![-r; dim];
    loop {
        let x: RatVec = idx.iter().map(|&k| Rat::from_integer(k.into())).collect();
        if !x.iter().all(|v| v.is_zero()) && phi(config, &x, Some(&reference))? != 0 {
            let ratio = ratio_exact(config.space(), majorant, &x)?;
            best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
        }
        // Odometer over the box.
        let mut carry = 0;
        while carry < dim {
            idx[carry] += 1;
            if idx[carry] <= r {
                break;
            }
            idx[carry] = -r;
            carry += 1;
        }
        if carry == dim {
            break;
        }
    }
    Ok(best)
}
