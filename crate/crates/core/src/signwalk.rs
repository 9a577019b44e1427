//! Exact evaluation of the cyclic sign-pairing weight, its reference
//! value on negative vectors, the theta summand weight, winding counts,
//! and path audits along polylines inside the negative cone.
//!
//! The sign of an exact zero pairing is 0 throughout, which makes the
//! weight total on all of the space, including wall points.

use crate::error::{Error, Result};
use crate::exec;
use crate::incidence::{check_all, ConeConfig};
use crate::matrix::RatVec;
use crate::rat::{from_f64_approx, rat, sign, Rat};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Signs of the pairings (x, C_j), entries in {-1, 0, +1}.
pub fn sign_vector(config: &ConeConfig, x: &[Rat]) -> Vec<i8> {
    (0..config.len())
        .map(|j| sign(&config.pairing(x, j)) as i8)
        .collect()
}

pub fn is_regular(config: &ConeConfig, x: &[Rat]) -> bool {
    (0..config.len()).all(|j| !config.pairing(x, j).is_zero())
}

/// The cyclic sum of consecutive sign products. Exact integer in [-N, N].
pub fn evaluate_w(config: &ConeConfig, x: &[Rat]) -> i64 {
    let signs = sign_vector(config, x);
    w_of_signs(&signs)
}

pub fn w_of_signs(signs: &[i8]) -> i64 {
    let n = signs.len();
    (0..n)
        .map(|j| signs[j] as i64 * signs[(j + 1) % n] as i64)
        .sum()
}

/// Reference weight: the common value of the weight on negative regular
/// vectors of a configuration passing the full incidence check.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceWeight {
    pub w_c: i64,
    #[serde(skip)]
    pub witness: RatVec,
    pub audited: bool,
    pub audit_samples: usize,
}

impl ReferenceWeight {
    /// Explicit reference at a caller-supplied negative regular vector.
    /// This is the only way to attach a reference to a configuration
    /// failing the incidence check, where no canonical value exists.
    pub fn explicit(config: &ConeConfig, witness: RatVec) -> Result<Self> {
        if !config.space().norm(&witness)?.is_negative() {
            return Err(Error::Precondition(
                "explicit reference witness must have negative norm".into(),
            ));
        }
        if !is_regular(config, &witness) {
            return Err(Error::NotRegular("explicit reference witness".into()));
        }
        let w_c = evaluate_w(config, &witness);
        Ok(ReferenceWeight { w_c, witness, audited: false, audit_samples: 0 })
    }
}

const REFERENCE_AUDIT_SAMPLES: usize = 200;
const REFERENCE_AUDIT_SEED: u64 = 0xA0D17;
const CIRCLE_DENOM: i64 = 1000;

/// Random vectors with exactly negative norm, regular at the
/// configuration. Deterministic per seed.
pub fn negative_regular_samples(
    config: &ConeConfig,
    count: usize,
    seed: u64,
) -> Result<Vec<RatVec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = 200 * count + 1000;
    while out.len() < count {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Budget(format!(
                "negative regular sampling: {} of {count} found in {budget} attempts",
                out.len()
            )));
        }
        if let Some(x) = negative_candidate(config, &mut rng)? {
            if is_regular(config, &x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// One random exactly-negative vector (not necessarily regular).
fn negative_candidate(config: &ConeConfig, rng: &mut ChaCha8Rng) -> Result<Option<RatVec>> {
    let space = config.space();
    let neg = space.negative_axes();
    let diag = &space.certificate().diag;
    let dim = space.dim();
    let theta: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let mut y = vec![Rat::zero(); dim];
    y[neg[0]] = from_f64_approx(theta.cos(), CIRCLE_DENOM);
    y[neg[1]] = from_f64_approx(theta.sin(), CIRCLE_DENOM);
    let neg_part: Rat = neg.iter().map(|&i| &diag[i] * &y[i] * &y[i]).sum();
    if !neg_part.is_negative() {
        return Ok(None);
    }
    let pos_axes: Vec<usize> = (0..dim).filter(|i| !neg.contains(i)).collect();
    let p: Vec<Rat> = pos_axes.iter().map(|_| rat(rng.gen_range(-100..=100), 100)).collect();
    let pos_part: Rat = pos_axes
        .iter()
        .zip(&p)
        .map(|(&i, pi)| &diag[i] * pi * pi)
        .sum();
    let mut lambda = if pos_part.is_zero() {
        Rat::zero()
    } else {
        let ratio = crate::rat::to_f64(&(-&neg_part / &pos_part));
        from_f64_approx(0.7 * ratio.sqrt(), CIRCLE_DENOM)
    };
    // Shrink until the exact norm is negative.
    for _ in 0..8 {
        let total = &neg_part + &pos_part * &lambda * &lambda;
        if total.is_negative() {
            for (&i, pi) in pos_axes.iter().zip(&p) {
                y[i] = pi * &lambda;
            }
            let x = space.from_diag_coords(&y)?;
            debug_assert!(space.norm(&x)?.is_negative());
            return Ok(Some(x));
        }
        lambda /= Rat::from_integer(2.into());
    }
    Ok(None)
}

/// Negative-norm vectors lying exactly on the wall of C_j (zero-based)
/// and regular at every other index.
pub fn wall_points(
    config: &ConeConfig,
    j: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<RatVec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = config.space();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = 400 * count + 2000;
    while out.len() < count {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Budget(format!(
                "wall sampling at index {}: {} of {count} found",
                j + 1,
                out.len()
            )));
        }
        let (Some(u), Some(up)) =
            (negative_candidate(config, &mut rng)?, negative_candidate(config, &mut rng)?)
        else {
            continue;
        };
        let pu = config.pairing(&u, j);
        let pv = config.pairing(&up, j);
        if pv.is_zero() {
            continue;
        }
        // v = u - (pu/pv) u' has (v, C_j) = 0 exactly.
        let f = &pu / &pv;
        let v: RatVec = u.iter().zip(&up).map(|(a, b)| a - &f * b).collect();
        if !space.norm(&v)?.is_negative() {
            continue;
        }
        let others_regular =
            (0..config.len()).all(|i| i == j || !config.pairing(&v, i).is_zero());
        if others_regular {
            out.push(v);
        }
    }
    Ok(out)
}

/// Finds a negative regular witness by a deterministic candidate ladder
/// (circle grid in the negative plane of the diagonalizing coordinates,
/// then seeded perturbations), evaluates the weight there, and audits
/// constancy over additional random negative regular vectors.
pub fn reference_weight(config: &ConeConfig) -> Result<ReferenceWeight> {
    if !check_all(config).overall {
        return Err(Error::Precondition(
            "reference weight requires a configuration passing the incidence check; \
             supply an explicit reference instead"
                .into(),
        ));
    }
    let witness = find_negative_regular(config)?;
    let w_c = evaluate_w(config, &witness);
    audit_reference(config, w_c, REFERENCE_AUDIT_SAMPLES, REFERENCE_AUDIT_SEED)?;
    Ok(ReferenceWeight {
        w_c,
        witness,
        audited: true,
        audit_samples: REFERENCE_AUDIT_SAMPLES,
    })
}

fn find_negative_regular(config: &ConeConfig) -> Result<RatVec> {
    let space = config.space();
    let neg = space.negative_axes();
    let dim = space.dim();
    // Grid of circle directions in the negative plane.
    for k in 0..32u32 {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / 32.0;
        let mut y = vec![Rat::zero(); dim];
        y[neg[0]] = from_f64_approx(theta.cos(), CIRCLE_DENOM);
        y[neg[1]] = from_f64_approx(theta.sin(), CIRCLE_DENOM);
        let x = space.from_diag_coords(&y)?;
        if space.norm(&x)?.is_negative() && is_regular(config, &x) {
            return Ok(x);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for _ in 0..500 {
        if let Some(x) = negative_candidate(config, &mut rng)? {
            if is_regular(config, &x) {
                return Ok(x);
            }
        }
    }
    Err(Error::Budget(
        "no negative regular vector found within the 532-candidate search budget".into(),
    ))
}

/// Asserts that the weight equals `w_c` at `samples` random negative
/// regular vectors. Failure signals an invalid configuration or a bug.
pub fn audit_reference(config: &ConeConfig, w_c: i64, samples: usize, seed: u64) -> Result<()> {
    let points = negative_regular_samples(config, samples, seed)?;
    let values = exec::map_slice(&points, |x| evaluate_w(config, x));
    if let Some(idx) = values.iter().position(|&w| w != w_c) {
        return Err(Error::Audit(format!(
            "weight audit: sample {idx} has w = {} but reference is {w_c}",
            values[idx]
        )));
    }
    Ok(())
}

/// Theta summand weight: w(x) minus the reference value.
pub fn phi(config: &ConeConfig, x: &[Rat], reference: Option<&ReferenceWeight>) -> Result<i64> {
    let w_c = match reference {
        Some(r) => r.w_c,
        None => reference_weight(config)?.w_c,
    };
    Ok(evaluate_w(config, x) - w_c)
}

/// Number of crossings of the cyclic segment loop through the hyperplane
/// orthogonal to `v`; satisfies w = N - 4r for regular v.
pub fn winding_count(config: &ConeConfig, v: &[Rat]) -> Result<i64> {
    let signs = sign_vector(config, v);
    if signs.iter().any(|&s| s == 0) {
        return Err(Error::NotRegular("winding count needs a regular vector".into()));
    }
    let n = signs.len();
    let negative_pairs = (0..n)
        .filter(|&j| signs[j] as i64 * signs[(j + 1) % n] as i64 == -1)
        .count() as i64;
    debug_assert_eq!(negative_pairs % 2, 0);
    Ok(negative_pairs / 2)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PathOutcome {
    /// The weight is constant along the path and every wall crossing
    /// satisfied the neighbor sign condition.
    Constant { w: i64, samples: usize, crossings: usize },
    Violation { description: String },
}

/// Audits a polyline inside the negative cone: every sample point must
/// have negative norm, the weight must be constant across regular
/// samples, and at each wall crossing the neighbor sign product must be
/// -1. Wall crossing points are solved exactly (the pairing is linear in
/// the segment parameter), so the audit itself is exact; `steps` only
/// controls how crossings are localized.
pub fn path_constancy_check(
    config: &ConeConfig,
    path: &[RatVec],
    steps: usize,
) -> Result<PathOutcome> {
    if path.len() < 2 || steps == 0 {
        return Err(Error::Precondition("need at least two vertices and one step".into()));
    }
    let space = config.space();
    for (i, p) in path.iter().enumerate() {
        if !space.norm(p)?.is_negative() {
            return Err(Error::PathEscapes(format!(
                "polyline vertex {i} has nonnegative norm"
            )));
        }
    }
    let mut w_ref: Option<i64> = None;
    let mut samples = 0usize;
    let mut crossings = 0usize;
    for seg in path.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let mut prev_signs: Option<Vec<i8>> = None;
        for k in 0..=steps {
            let t = rat(k as i64, steps as i64);
            let point: RatVec = a
                .iter()
                .zip(b)
                .map(|(x, y)| x * (Rat::from_integer(1.into()) - &t) + y * &t)
                .collect();
            if !space.norm(&point)?.is_negative() {
                return Err(Error::PathEscapes(format!(
                    "sample at t = {}/{} has nonnegative norm",
                    k, steps
                )));
            }
            let signs = sign_vector(config, &point);
            samples += 1;
            if signs.iter().all(|&s| s != 0) {
                let w = w_of_signs(&signs);
                match w_ref {
                    None => w_ref = Some(w),
                    Some(w0) if w0 != w => {
                        return Ok(PathOutcome::Violation {
                            description: format!(
                                "weight jumps {w0} -> {w} at step {k}/{steps}"
                            ),
                        })
                    }
                    _ => {}
                }
            }
            if let Some(prev) = &prev_signs {
                for j in 0..config.len() {
                    if prev[j] != signs[j] {
                        if let Some(v) = crossing_point(config, a, b, j)? {
                            crossings += 1;
                            if !space.norm(&v)?.is_negative() {
                                return Err(Error::PathEscapes(format!(
                                    "wall crossing at index {} has nonnegative norm",
                                    j + 1
                                )));
                            }
                            let n = config.len();
                            let sp = sign(&config.pairing(&v, (j + n - 1) % n));
                            let sn = sign(&config.pairing(&v, (j + 1) % n));
                            if sp * sn != -1 {
                                return Ok(PathOutcome::Violation {
                                    description: format!(
                                        "wall crossing at index {}: neighbor sign product {} != -1",
                                        j + 1,
                                        sp * sn
                                    ),
                                });
                            }
                        }
                    }
                }
            }
            prev_signs = Some(signs);
        }
    }
    Ok(PathOutcome::Constant { w: w_ref.unwrap_or(0), samples, crossings })
}

/// Exact root of the pairing with C_j along the segment a -> b, if any.
fn crossing_point(
    config: &ConeConfig,
    a: &[Rat],
    b: &[Rat],
    j: usize,
) -> Result<Option<RatVec>> {
    let pa = config.pairing(a, j);
    let pb = config.pairing(b, j);
    if pa == pb {
        return Ok(None);
    }
    let t = &pa / (&pa - &pb);
    if t.is_negative() || t > Rat::from_integer(1.into()) {
        return Ok(None);
    }
    let one = Rat::from_integer(1.into());
    Ok(Some(
        a.iter()
            .zip(b)
            .map(|(x, y)| x * (&one - &t) + y * &t)
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::fixtures::{space_112, triple_invalid, triple_valid};
    use crate::incidence::{random_valid_config, GenMode};
    use crate::matrix::int_vec;

    #[test]
    fn sign_vectors() {
        let c = triple_valid();
        assert_eq!(sign_vector(&c, &int_vec(&[2, 1, 0])), vec![-1, -1, 1]);
        assert_eq!(sign_vector(&c, &int_vec(&[0, 0, 1])), vec![0, 0, 0]);
        assert_eq!(sign_vector(&c, &int_vec(&[0, 1, 0])), vec![0, -1, 1]);
    }

    #[test]
    fn regularity() {
        let c = triple_valid();
        assert!(is_regular(&c, &int_vec(&[2, 1, 0])));
        assert!(!is_regular(&c, &int_vec(&[0, 0, 1])));
        assert!(!is_regular(&c, &int_vec(&[0, 1, 0])));
    }

    #[test]
    fn w_values() {
        let c = triple_valid();
        // Direct sign expansion: signs (-1,-1,+1) give 1 - 1 - 1 = -1.
        assert_eq!(evaluate_w(&c, &int_vec(&[2, 1, 0])), -1);
        assert_eq!(evaluate_w(&c, &int_vec(&[0, 0, 1])), 0);
        let b = triple_invalid();
        assert_eq!(evaluate_w(&b, &int_vec(&[2, 1, 0])), 3);
    }

    #[test]
    fn w_homogeneous_degree_zero() {
        let c = triple_valid();
        let x = int_vec(&[2, 1, 0]);
        let scaled: Vec<Rat> = x.iter().map(|v| v * rat(7, 3)).collect();
        assert_eq!(evaluate_w(&c, &x), evaluate_w(&c, &scaled));
    }

    #[test]
    fn reference_weight_valid() {
        let c = triple_valid();
        let r = reference_weight(&c).unwrap();
        assert_eq!(r.w_c, -1);
        assert!(r.audited);
    }

    #[test]
    fn reference_weight_refuses_invalid() {
        let b = triple_invalid();
        assert!(matches!(reference_weight(&b), Err(Error::Precondition(_))));
        // Explicit reference still works.
        let r = ReferenceWeight::explicit(&b, int_vec(&[2, -1, 0])).unwrap();
        assert_eq!(r.w_c, -1);
    }

    #[test]
    fn phi_values() {
        let c = triple_valid();
        // Non-regular point on the degenerate axis: w = 0, so phi = 1.
        assert_eq!(phi(&c, &int_vec(&[0, 0, 2]), None).unwrap(), 1);
        assert_eq!(phi(&c, &int_vec(&[1, 2, 0]), None).unwrap(), 0);
        let b = triple_invalid();
        let r = ReferenceWeight::explicit(&b, int_vec(&[2, -1, 0])).unwrap();
        assert_eq!(phi(&b, &int_vec(&[2, 1, 0]), Some(&r)).unwrap(), 4);
    }

    #[test]
    fn winding_counts() {
        let c = triple_valid();
        let v = int_vec(&[2, 1, 0]);
        let r = winding_count(&c, &v).unwrap();
        assert_eq!(r, 1);
        assert_eq!(evaluate_w(&c, &v), 3 - 4 * r);
        assert!(winding_count(&c, &int_vec(&[0, 1, 0])).is_err());
    }

    #[test]
    fn winding_identity_on_generated() {
        let s = space_112();
        for &n in &[3usize, 5, 8] {
            let c = random_valid_config(&s, n, GenMode::Planar, 42).unwrap();
            let pts = negative_regular_samples(&c, 50, 9).unwrap();
            for v in &pts {
                let r = winding_count(&c, v).unwrap();
                assert_eq!(evaluate_w(&c, v), n as i64 - 4 * r);
            }
        }
    }

    #[test]
    fn reference_weight_matches_winding_for_n5() {
        let s = space_112();
        let c = random_valid_config(&s, 5, GenMode::Planar, 0).unwrap();
        let r = reference_weight(&c).unwrap();
        // The loop winds once, so it crosses the line orthogonal to any
        // negative vector twice: r = 1 and w = 5 - 4 = 1.
        assert_eq!(r.w_c, 1);
        assert_eq!(winding_count(&c, &r.witness).unwrap(), 1);
    }

    #[test]
    fn wall_lemma_samples() {
        let c = triple_valid();
        for j in 0..3 {
            for v in wall_points(&c, j, 50, 123).unwrap() {
                let sp = sign(&c.pairing(&v, (j + 2) % 3));
                let sn = sign(&c.pairing(&v, (j + 1) % 3));
                assert_eq!(sp * sn, -1);
            }
        }
    }

    #[test]
    fn path_constant_on_valid() {
        let c = triple_valid();
        let out =
            path_constancy_check(&c, &[int_vec(&[2, 1, 0]), int_vec(&[1, 2, 0])], 1000).unwrap();
        match out {
            PathOutcome::Constant { w, .. } => assert_eq!(w, -1),
            PathOutcome::Violation { description } => panic!("unexpected: {description}"),
        }
    }

    #[test]
    fn path_violation_on_invalid() {
        let b = triple_invalid();
        let out =
            path_constancy_check(&b, &[int_vec(&[2, 1, 0]), int_vec(&[2, -1, 0])], 1000).unwrap();
        assert!(matches!(out, PathOutcome::Violation { .. }));
    }

    #[test]
    fn path_escaping_rejected() {
        let c = triple_valid();
        let err = path_constancy_check(&c, &[int_vec(&[2, 1, 0]), int_vec(&[0, 0, 1])], 100);
        assert!(matches!(err, Err(Error::PathEscapes(_))));
    }
}
