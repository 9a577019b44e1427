//! Exact verification of the incidence conditions for a cyclic cone
//! configuration, and seeded generation of test configurations.
//!
//! All verdicts are computed over exact rationals; every report records
//! the exact tested quantity so a failure pinpoints the offending index.

use crate::error::{Error, Result};
use crate::matrix::{is_zero_vec, RatMat, RatVec};
use crate::quadform::QuadraticSpace;
use crate::rat::{from_f64_approx, rat, rat_serde, rat_to_string, Rat, RatStr};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A cyclic list of nonzero cone vectors over a signature-(n,2) space,
/// with cached pairwise inner products.
#[derive(Clone, Debug)]
pub struct ConeConfig {
    space: QuadraticSpace,
    vectors: Vec<RatVec>,
    gram_cache: RatMat,
    /// gram * C_j, cached so (x, C_j) is a single dot product.
    gram_vectors: Vec<RatVec>,
}

impl ConeConfig {
    pub fn new(space: QuadraticSpace, vectors: Vec<RatVec>) -> Result<Self> {
        space.expect_n2()?;
        let n = vectors.len();
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 cone vectors, got {n}"
            )));
        }
        for (j, c) in vectors.iter().enumerate() {
            if c.len() != space.dim() {
                return Err(Error::Shape(format!(
                    "cone vector {} has dimension {}, ambient is {}",
                    j + 1,
                    c.len(),
                    space.dim()
                )));
            }
            if is_zero_vec(c) {
                return Err(Error::InvalidConfig(format!("cone vector {} is zero", j + 1)));
            }
        }
        let mut gram_cache = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram_cache[(i, j)] = space.inner(&vectors[i], &vectors[j])?;
            }
        }
        let gram_vectors = vectors
            .iter()
            .map(|c| space.gram().mul_vec(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConeConfig { space, vectors, gram_cache, gram_vectors })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn vectors(&self) -> &[RatVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Cached (C_i, C_j), zero-based indices taken mod N.
    pub fn pair(&self, i: usize, j: usize) -> &Rat {
        let n = self.len();
        &self.gram_cache[(i % n, j % n)]
    }

    /// gram * C_j, i.e. the linear functional x -> (x, C_j) as a row.
    pub fn pairing_row(&self, j: usize) -> &RatVec {
        &self.gram_vectors[j % self.len()]
    }

    /// (x, C_j), zero-based index taken mod N.
    pub fn pairing(&self, x: &[Rat], j: usize) -> Rat {
        let gc = &self.gram_vectors[j % self.len()];
        x.iter().zip(gc).map(|(a, b)| a * b).sum()
    }

    pub fn is_null_vector(&self, j: usize) -> bool {
        self.pair(j, j).is_zero()
    }
}

/// JSON schema for configuration files:
/// `{ "gram": [[...]], "vectors": [[...], ...], "basis": optional, "mu": optional }`.
#[derive(Serialize, Deserialize)]
pub struct ConeConfigFile {
    pub gram: Vec<Vec<RatStr>>,
    pub vectors: Vec<Vec<RatStr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<RatStr>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<RatStr>>,
}

fn unwrap_rows(rows: &[Vec<RatStr>]) -> Vec<RatVec> {
    rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

fn wrap_rows(rows: Vec<RatVec>) -> Vec<Vec<RatStr>> {
    rows.into_iter().map(|r| r.into_iter().map(RatStr).collect()).collect()
}

impl ConeConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_config(&self) -> Result<ConeConfig> {
        let gram = RatMat::from_rows(unwrap_rows(&self.gram))?;
        let space = QuadraticSpace::new_n2(gram)?;
        ConeConfig::new(space, unwrap_rows(&self.vectors))
    }

    pub fn lattice(&self) -> Result<crate::quadform::Lattice> {
        let gram = RatMat::from_rows(unwrap_rows(&self.gram))?;
        let space = QuadraticSpace::new_n2(gram)?;
        let dim = space.dim();
        let mu = self
            .mu
            .as_ref()
            .map(|m| m.iter().map(|x| x.0.clone()).collect())
            .unwrap_or_else(|| vec![Rat::zero(); dim]);
        match &self.basis {
            Some(b) => {
                let basis = RatMat::from_rows(unwrap_rows(b))?;
                crate::quadform::Lattice::with_basis(space, basis, mu)
            }
            None => crate::quadform::Lattice::standard(space, mu),
        }
    }

    pub fn from_config(config: &ConeConfig) -> Self {
        ConeConfigFile {
            gram: wrap_rows(config.space().gram().to_rows()),
            vectors: wrap_rows(config.vectors().to_vec()),
            basis: None,
            mu: None,
        }
    }
}

/// Per-index verdict with the exact tested quantity. Indices are 1-based
/// in reports, matching the usual cyclic labeling C_1..C_N.
#[derive(Clone, Debug, Serialize)]
pub struct IndexVerdict {
    pub index: usize,
    pub pass: bool,
    #[serde(with = "rat_serde")]
    pub quantity: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum I2Branch {
    /// Both norms negative: the 2x2 Gram determinant must be positive.
    PositiveProduct,
    /// Product of norms is zero: (C_j, C_{j+1}) must vanish.
    ZeroProduct,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub index: usize,
    pub pass: bool,
    pub branch: I2Branch,
    #[serde(with = "rat_serde")]
    pub quantity: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum I3Branch {
    NegativeNorm,
    NullNorm,
}

#[derive(Clone, Debug, Serialize)]
pub struct I3Verdict {
    pub index: usize,
    pub pass: bool,
    pub branch: I3Branch,
    #[serde(with = "rat_serde")]
    pub quantity: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub condition: String,
    pub index: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    pub i1: Vec<IndexVerdict>,
    pub i2: Vec<PairVerdict>,
    pub i3: Vec<I3Verdict>,
    pub no_three_nulls: bool,
    pub overall: bool,
    pub violations: Vec<Violation>,
}

/// First condition: every cone vector has nonpositive norm.
pub fn check_i1(config: &ConeConfig) -> Vec<IndexVerdict> {
    (0..config.len())
        .map(|j| {
            let q = config.pair(j, j).clone();
            IndexVerdict { index: j + 1, pass: !q.is_positive(), quantity: q }
        })
        .collect()
}

/// Second condition, per consecutive pair (cyclically).
pub fn check_i2(config: &ConeConfig) -> Vec<PairVerdict> {
    let n = config.len();
    (0..n)
        .map(|j| {
            let jj = (j + 1) % n;
            let prod = config.pair(j, j) * config.pair(jj, jj);
            if prod.is_zero() {
                // Equivalent to the vanishing of the 2x2 Gram determinant
                // once the norms are nonpositive.
                let q = config.pair(j, jj).clone();
                PairVerdict {
                    index: j + 1,
                    pass: q.is_zero(),
                    branch: I2Branch::ZeroProduct,
                    quantity: q,
                }
            } else {
                let det = &prod - config.pair(j, jj) * config.pair(j, jj);
                PairVerdict {
                    index: j + 1,
                    pass: det.is_positive(),
                    branch: I2Branch::PositiveProduct,
                    quantity: det,
                }
            }
        })
        .collect()
}

/// Third condition, branch selected by the sign of (C_j, C_j).
pub fn check_i3(config: &ConeConfig) -> Vec<I3Verdict> {
    let n = config.len();
    (0..n)
        .map(|j| {
            let prev = (j + n - 1) % n;
            let next = (j + 1) % n;
            let norm = config.pair(j, j);
            if norm.is_zero() {
                let q = config.pair(prev, next).clone();
                I3Verdict {
                    index: j + 1,
                    pass: q.is_positive(),
                    branch: I3Branch::NullNorm,
                    quantity: q,
                }
            } else {
                let q = norm * config.pair(prev, next)
                    - config.pair(j, prev) * config.pair(j, next);
                I3Verdict {
                    index: j + 1,
                    pass: q.is_negative(),
                    branch: I3Branch::NegativeNorm,
                    quantity: q,
                }
            }
        })
        .collect()
}

/// True iff no cyclic window of three consecutive vectors is all null.
pub fn check_no_three_nulls(config: &ConeConfig) -> bool {
    let n = config.len();
    if n < 3 {
        return true;
    }
    !(0..n).any(|j| {
        config.is_null_vector(j)
            && config.is_null_vector((j + 1) % n)
            && config.is_null_vector((j + 2) % n)
    })
}

pub fn check_all(config: &ConeConfig) -> IncidenceReport {
    let i1 = check_i1(config);
    let i2 = check_i2(config);
    let i3 = check_i3(config);
    let no_three_nulls = check_no_three_nulls(config);
    let mut violations = Vec::new();
    for v in &i1 {
        if !v.pass {
            violations.push(Violation {
                condition: "I.1".into(),
                index: v.index,
                value: rat_to_string(&v.quantity),
            });
        }
    }
    for v in &i2 {
        if !v.pass {
            violations.push(Violation {
                condition: "I.2".into(),
                index: v.index,
                value: rat_to_string(&v.quantity),
            });
        }
    }
    for v in &i3 {
        if !v.pass {
            violations.push(Violation {
                condition: "I.3".into(),
                index: v.index,
                value: rat_to_string(&v.quantity),
            });
        }
    }
    if !no_three_nulls {
        violations.push(Violation {
            condition: "no-three-nulls".into(),
            index: 0,
            value: "three consecutive null vectors".into(),
        });
    }
    let overall = violations.is_empty();
    IncidenceReport { i1, i2, i3, no_three_nulls, overall, violations }
}

#[derive(Clone, Debug)]
pub enum GenMode {
    /// Cone vectors on a rational approximation of the unit circle of a
    /// negative 2-plane, with cyclically monotone angles winding once.
    Planar,
    /// Planar start plus small rational perturbations of every
    /// coordinate, rejected until the full check passes.
    Perturbed { scale: Rat },
}

const ANGLE_DENOM: i64 = 10_000;
const MAX_REJECTS: usize = 200;

fn planar_vectors(
    space: &QuadraticSpace,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<RatVec>> {
    let neg = space.negative_axes();
    debug_assert_eq!(neg.len(), 2);
    let dim = space.dim();
    // Jitter confined to [0.3, 0.7) keeps every cyclic step inside
    // (0.6, 1.4) * 2*pi/n, hence strictly between 0 and pi for n >= 3.
    let mut vectors = Vec::with_capacity(n);
    for j in 0..n {
        let jitter: f64 = rng.gen_range(0.3..0.7);
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + jitter) / n as f64;
        let mut y = vec![Rat::zero(); dim];
        y[neg[0]] = from_f64_approx(theta.cos(), ANGLE_DENOM);
        y[neg[1]] = from_f64_approx(theta.sin(), ANGLE_DENOM);
        vectors.push(space.from_diag_coords(&y)?);
    }
    Ok(vectors)
}

/// Deterministic (per seed) generator of configurations passing the full
/// incidence check.
pub fn random_valid_config(
    space: &QuadraticSpace,
    n: usize,
    mode: GenMode,
    seed: u64,
) -> Result<ConeConfig> {
    space.expect_n2()?;
    if n < 3 {
        return Err(Error::InvalidConfig(format!(
            "planar generation needs N >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0usize;
    loop {
        let base = planar_vectors(space, n, &mut rng)?;
        let vectors = match &mode {
            GenMode::Planar => base,
            GenMode::Perturbed { scale } => base
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|x| {
                            let d = rat(rng.gen_range(-100..=100), 100) * scale;
                            x + d
                        })
                        .collect()
                })
                .collect(),
        };
        if vectors.iter().all(|c| !is_zero_vec(c)) {
            let config = ConeConfig::new(space.clone(), vectors)?;
            if check_all(&config).overall {
                return Ok(config);
            }
        }
        attempts += 1;
        if attempts >= MAX_REJECTS {
            return Err(Error::Generation {
                attempts,
                reason: match mode {
                    GenMode::Planar => "planar generation kept failing the incidence check".into(),
                    GenMode::Perturbed { ref scale } => format!(
                        "perturbation scale {} too large for the incidence check",
                        rat_to_string(scale)
                    ),
                },
            });
        }
    }
}

/// Planar configuration with random (cyclically unconstrained) angles:
/// always satisfies the first two conditions and has no null vectors,
/// while the third condition may or may not hold.
pub fn random_mixed_config(space: &QuadraticSpace, n: usize, seed: u64) -> Result<ConeConfig> {
    space.expect_n2()?;
    if n < 3 {
        return Err(Error::InvalidConfig(format!("need N >= 3, got {n}")));
    }
    let neg = space.negative_axes();
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'outer: loop {
        let angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI))
            .collect();
        // Consecutive pairs must be safely non-parallel so the second
        // condition holds and no sector collapses.
        for j in 0..n {
            let d = angles[(j + 1) % n] - angles[j];
            if d.sin().abs() < 0.15 {
                continue 'outer;
            }
        }
        let vectors: Vec<RatVec> = angles
            .iter()
            .map(|&t| {
                let mut y = vec![Rat::zero(); dim];
                y[neg[0]] = from_f64_approx(t.cos(), ANGLE_DENOM);
                y[neg[1]] = from_f64_approx(t.sin(), ANGLE_DENOM);
                space.from_diag_coords(&y)
            })
            .collect::<Result<Vec<_>>>()?;
        let config = ConeConfig::new(space.clone(), vectors)?;
        let rep = check_all(&config);
        if rep.i1.iter().all(|v| v.pass) && rep.i2.iter().all(|v| v.pass) && rep.no_three_nulls {
            return Ok(config);
        }
    }
}

/// Small reference configurations over diag(-1,-1,1), used throughout the
/// test suites and documentation.
pub mod fixtures {
    use super::*;
    use crate::rat::rat_int;

    pub fn space_112() -> QuadraticSpace {
        let d = vec![rat_int(-1), rat_int(-1), rat_int(1)];
        QuadraticSpace::new_n2(RatMat::diagonal(&d)).unwrap()
    }

    /// {(1,0,0), (0,1,0), (-4/5,-3/5,0)}: passes the full incidence check.
    pub fn triple_valid() -> ConeConfig {
        let vectors = vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat(-4, 5), rat(-3, 5), rat_int(0)],
        ];
        ConeConfig::new(space_112(), vectors).unwrap()
    }

    /// {(1,0,0), (0,1,0), (3/5,4/5,0)}: passes the first two conditions,
    /// fails the third at index 2.
    pub fn triple_invalid() -> ConeConfig {
        let vectors = vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat(3, 5), rat(4, 5), rat_int(0)],
        ];
        ConeConfig::new(space_112(), vectors).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::matrix::int_vec;
    use crate::rat::rat_int;

    #[test]
    fn i1_verdicts() {
        let c = triple_valid();
        let v = check_i1(&c);
        assert!(v.iter().all(|x| x.pass));
        assert_eq!(v[0].quantity, rat_int(-1));
        assert_eq!(v[2].quantity, rat_int(-1));

        // A positive-norm vector fails at its index.
        let bad = ConeConfig::new(
            space_112(),
            vec![
                int_vec(&[0, 0, 1]),
                int_vec(&[0, 1, 0]),
                int_vec(&[1, 0, 0]),
            ],
        )
        .unwrap();
        let v = check_i1(&bad);
        assert!(!v[0].pass);
        assert_eq!(v[0].quantity, rat_int(1));

        // A null vector passes the boundary case.
        let null = ConeConfig::new(
            space_112(),
            vec![int_vec(&[1, 0, 1]), int_vec(&[0, 1, 0])],
        )
        .unwrap();
        assert!(check_i1(&null)[0].pass);
    }

    #[test]
    fn i2_verdicts() {
        let c = triple_valid();
        let v = check_i2(&c);
        assert!(v.iter().all(|x| x.pass));
        // Pair (2,3): 1 - (3/5)^2 = 16/25.
        assert_eq!(v[1].quantity, rat(16, 25));

        // Null against itself passes through the zero branch.
        let null = ConeConfig::new(
            space_112(),
            vec![int_vec(&[1, 0, 1]), int_vec(&[1, 0, 1])],
        )
        .unwrap();
        let v = check_i2(&null);
        assert!(v[0].pass);
        assert_eq!(v[0].branch, I2Branch::ZeroProduct);

        // Parallel negative vectors fail: determinant 0 with positive
        // product of norms.
        let par = ConeConfig::new(
            space_112(),
            vec![int_vec(&[1, 0, 0]), int_vec(&[-1, 0, 0])],
        )
        .unwrap();
        let v = check_i2(&par);
        assert!(!v[0].pass);
        assert_eq!(v[0].branch, I2Branch::PositiveProduct);
        assert_eq!(v[0].quantity, rat_int(0));
    }

    #[test]
    fn i3_verdicts_valid() {
        let c = triple_valid();
        let v = check_i3(&c);
        assert!(v.iter().all(|x| x.pass));
        assert_eq!(v[0].quantity, rat(-3, 5));
        assert_eq!(v[1].quantity, rat(-4, 5));
        assert_eq!(v[2].quantity, rat(-12, 25));
    }

    #[test]
    fn i3_verdicts_invalid() {
        let c = triple_invalid();
        let v = check_i3(&c);
        assert!(!v[1].pass);
        assert_eq!(v[1].quantity, rat(3, 5));
    }

    #[test]
    fn no_three_nulls_windows() {
        assert!(check_no_three_nulls(&triple_valid()));

        let all_null = ConeConfig::new(
            space_112(),
            vec![
                int_vec(&[1, 0, 1]),
                int_vec(&[0, 1, 1]),
                int_vec(&[-1, 0, 1]),
            ],
        )
        .unwrap();
        assert!(!check_no_three_nulls(&all_null));

        // Cyclic wraparound: nulls at 1, 2, 4 put the window (4,1,2)
        // entirely on nulls.
        let wrap = ConeConfig::new(
            space_112(),
            vec![
                int_vec(&[1, 0, 1]),
                int_vec(&[0, 1, 1]),
                int_vec(&[0, 1, 0]),
                int_vec(&[-1, 0, 1]),
            ],
        )
        .unwrap();
        assert!(!check_no_three_nulls(&wrap));
    }

    #[test]
    fn check_all_aggregates() {
        assert!(check_all(&triple_valid()).overall);
        let rep = check_all(&triple_invalid());
        assert!(!rep.overall);
        // The third condition fails at indices 1 and 2; everything else
        // passes. Hand expansion: j=1 gives (-1)(C_3,C_2) = 4/5, j=2
        // gives (-1)(C_1,C_3) = 3/5.
        assert!(rep.i1.iter().all(|v| v.pass));
        assert!(rep.i2.iter().all(|v| v.pass));
        assert_eq!(rep.violations.len(), 2);
        assert!(rep.violations.iter().all(|v| v.condition == "I.3"));
        assert_eq!((rep.violations[0].index, rep.violations[0].value.as_str()), (1, "4/5"));
        assert_eq!((rep.violations[1].index, rep.violations[1].value.as_str()), (2, "3/5"));
    }

    #[test]
    fn two_vector_config_fails_i3() {
        let c = ConeConfig::new(
            space_112(),
            vec![int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])],
        )
        .unwrap();
        let v = check_i3(&c);
        assert!(!v[0].pass && !v[1].pass);
        // With N = 2, prev == next, so the tested quantity is
        // (C_j,C_j)(C_k,C_k) - (C_j,C_k)^2 = 1 at both indices.
        assert_eq!(v[0].quantity, rat_int(1));
        assert_eq!(v[1].quantity, rat_int(1));
    }

    #[test]
    fn reject_bad_inputs() {
        assert!(ConeConfig::new(space_112(), vec![int_vec(&[1, 0, 0])]).is_err());
        assert!(ConeConfig::new(
            space_112(),
            vec![int_vec(&[0, 0, 0]), int_vec(&[1, 0, 0])]
        )
        .is_err());
    }

    #[test]
    fn planar_generator_valid() {
        let s = space_112();
        for seed in 0..10 {
            for &n in &[3usize, 5, 8] {
                let c = random_valid_config(&s, n, GenMode::Planar, seed).unwrap();
                assert!(check_all(&c).overall, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn perturbed_generator() {
        let s = space_112();
        let c =
            random_valid_config(&s, 4, GenMode::Perturbed { scale: rat(1, 50) }, 3).unwrap();
        assert!(check_all(&c).overall);

        // Oversized perturbations exhaust the rejection budget.
        let big = random_valid_config(&s, 8, GenMode::Perturbed { scale: rat_int(1000) }, 3);
        assert!(matches!(big, Err(Error::Generation { .. })));
    }

    #[test]
    fn mixed_generator_satisfies_first_two() {
        let s = space_112();
        for seed in 0..20 {
            let c = random_mixed_config(&s, 4, seed).unwrap();
            let rep = check_all(&c);
            assert!(rep.i1.iter().all(|v| v.pass));
            assert!(rep.i2.iter().all(|v| v.pass));
            assert!(rep.no_three_nulls);
        }
    }

    #[test]
    fn verdicts_invariant_under_rotation_and_rescaling() {
        use rand::{Rng, SeedableRng};
        let base = triple_valid();
        let n = base.len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for rot in 0..n {
            let mut vectors: Vec<RatVec> = (0..n)
                .map(|j| base.vectors()[(j + rot) % n].clone())
                .collect();
            for v in &mut vectors {
                let s = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
                for x in v.iter_mut() {
                    *x *= &s;
                }
            }
            let c = ConeConfig::new(space_112(), vectors).unwrap();
            assert!(check_all(&c).overall);
        }
        // Same invariances preserve failure verdicts.
        let inv = triple_invalid();
        let rotated: Vec<RatVec> =
            (0..n).map(|j| inv.vectors()[(j + 1) % n].clone()).collect();
        let c = ConeConfig::new(space_112(), rotated).unwrap();
        assert!(!check_all(&c).overall);
    }

    #[test]
    fn i3_invariant_under_reversal() {
        let s = space_112();
        for seed in 0..5 {
            let c = random_valid_config(&s, 5, GenMode::Planar, seed).unwrap();
            let mut rev = c.vectors().to_vec();
            rev.reverse();
            let r = ConeConfig::new(s.clone(), rev).unwrap();
            assert!(check_i3(&r).iter().all(|v| v.pass), "seed {seed}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{
            "gram": [["-1", 0, 0], [0, "-1", 0], [0, 0, 1]],
            "vectors": [[1, 0, 0], [0, 1, 0], ["-4/5", "-3/5", 0]]
        }"#;
        let file = ConeConfigFile::parse(text).unwrap();
        let config = file.to_config().unwrap();
        assert!(check_all(&config).overall);
        let lat = file.lattice().unwrap();
        assert_eq!(lat.coset_offset.len(), 3);

        let back = ConeConfigFile::from_config(&config);
        let text2 = serde_json::to_string(&back).unwrap();
        let again = ConeConfigFile::parse(&text2).unwrap().to_config().unwrap();
        assert_eq!(again.vectors(), config.vectors());
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(ConeConfigFile::parse("{not json").is_err());
        assert!(ConeConfigFile::parse(r#"{"gram": [[1]], "vectors": [["1/0"]]}"#).is_err());
    }
}
