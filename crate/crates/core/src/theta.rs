//! Lattice-point enumeration under the majorant, the exact truncated
//! q-expansion, numerical evaluation with tail bounds, and the scan for
//! divergence witnesses.
//!
//! Coefficients and exponents are exact rationals throughout; floating
//! point appears only in the loop-range seeding of the enumeration
//! (checked exactly per candidate) and in series evaluation.

use crate::cones::{compute_r_inf, ConvergenceCertificate};
use crate::error::{Error, Result};
use crate::exec;
use crate::incidence::{check_all, ConeConfig, ConeConfigFile};
use crate::matrix::{RatMat, RatVec};
use crate::quadform::{Lattice, MajorantForm};
use crate::rat::{rat_int, rat_to_string, to_f64, Rat};
use crate::signwalk::{evaluate_w, negative_regular_samples, reference_weight, ReferenceWeight};
use num::complex::Complex64;
use num::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Exact LDL^t factorization of a positive definite rational matrix:
/// q = l * diag(d) * l^t with l unit lower triangular, all d positive.
pub struct LdlFactor {
    pub l: RatMat,
    pub d: Vec<Rat>,
}

pub fn ldl(q: &RatMat) -> Result<LdlFactor> {
    if !q.is_symmetric() {
        return Err(Error::Shape("factorization needs a symmetric matrix".into()));
    }
    let n = q.rows;
    let mut l = RatMat::identity(n);
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = q[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        if !dj.is_positive() {
            return Err(Error::Degenerate(format!(
                "pivot {} of the pulled-back majorant is not positive",
                j + 1
            )));
        }
        for i in j + 1..n {
            let mut v = q[(i, j)].clone();
            for k in 0..j {
                v -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = &v / &dj;
        }
        d[j] = dj;
    }
    Ok(LdlFactor { l, d })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    /// Integer coordinates k of the coset point k + mu in the lattice basis.
    pub coords: Vec<i64>,
    pub x: RatVec,
    pub norm: Rat,
    pub majorant_norm: Rat,
}

/// Exactly the points of mu + L with majorant(x,x) <= b, each once,
/// sorted by integer coordinates. Ellipsoid recursion on the LDL^t
/// factors of the pulled-back majorant; floating point only pads the
/// candidate ranges, every acceptance test is exact.
pub fn enumerate_lattice_points(
    lattice: &Lattice,
    majorant: &MajorantForm,
    b: &Rat,
) -> Result<Vec<LatticePoint>> {
    let q = lattice.basis.transpose().mul(&majorant.gram_pos)?.mul(&lattice.basis)?;
    let f = ldl(&q)?;
    let n = q.rows;
    let mu = &lattice.coset_offset;
    let mut out = Vec::new();
    if b.is_negative() {
        return Ok(out);
    }
    let mut y = vec![Rat::zero(); n];
    let mut k = vec![0i64; n];
    descend(&f, mu, n - 1, b.clone(), &mut y, &mut k, &mut |kk, yy| {
        let x = lattice.basis.mul_vec(yy)?;
        let norm = lattice.ambient.norm(&x)?;
        let majorant_norm = majorant.norm(&x)?;
        out.push(LatticePoint { coords: kk.to_vec(), x, norm, majorant_norm });
        Ok(())
    })?;
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

fn descend(
    f: &LdlFactor,
    mu: &[Rat],
    level: usize,
    remaining: Rat,
    y: &mut Vec<Rat>,
    k: &mut Vec<i64>,
    sink: &mut dyn FnMut(&[i64], &[Rat]) -> Result<()>,
) -> Result<()> {
    let n = mu.len();
    // c = sum_{i > level} l[i][level] * y_i; the quadratic form splits as
    // sum_j d_j (y_j + c_j)^2.
    let mut c = Rat::zero();
    for i in level + 1..n {
        c += &f.l[(i, level)] * &y[i];
    }
    let center = -to_f64(&(&c + &mu[level]));
    let half = (to_f64(&remaining) / to_f64(&f.d[level])).max(0.0).sqrt();
    let lo = (center - half).floor() as i64 - 2;
    let hi = (center + half).ceil() as i64 + 2;
    for kk in lo..=hi {
        y[level] = rat_int(kk) + &mu[level];
        k[level] = kk;
        let z = &y[level] + &c;
        let term = &f.d[level] * &z * &z;
        if term > remaining {
            continue;
        }
        if level == 0 {
            sink(k, y)?;
        } else {
            descend(f, mu, level - 1, &remaining - term, y, k, sink)?;
        }
    }
    Ok(())
}

/// Independent oracle: scans the whole coordinate box [-radius, radius]^n
/// and keeps points with majorant norm at most b. Quadratic in the box
/// volume; for tests only.
pub fn box_scan(
    lattice: &Lattice,
    majorant: &MajorantForm,
    b: &Rat,
    radius: i64,
) -> Result<Vec<LatticePoint>> {
    let n = lattice.ambient.dim();
    let mut out = Vec::new();
    let mut idx = vec![-radius; n];
    loop {
        let kr: RatVec = idx.iter().map(|&v| rat_int(v)).collect();
        let x = lattice.point(&kr)?;
        let majorant_norm = majorant.norm(&x)?;
        if majorant_norm <= *b {
            let norm = lattice.ambient.norm(&x)?;
            out.push(LatticePoint { coords: idx.clone(), x, norm, majorant_norm });
        }
        let mut carry = 0;
        while carry < n {
            idx[carry] += 1;
            if idx[carry] <= radius {
                break;
            }
            idx[carry] = -radius;
            carry += 1;
        }
        if carry == n {
            break;
        }
    }
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// A finite positive support ratio rho certifies rho * B >= 2M, so no
    /// exponent below the truncation can come from outside the ball.
    Certified,
    /// Re-enumeration with the doubled ball left all coefficients fixed.
    DoublingChecked,
    /// Neither certificate applied; coefficients are best-effort.
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct QExpansion {
    /// Sparse map exponent m -> integer coefficient c(m), m <= truncation.
    pub coeffs: BTreeMap<Rat, i64>,
    pub truncation: Rat,
    pub bound: Rat,
    pub completeness: Completeness,
    pub config_digest: String,
    pub certificate: Option<ConvergenceCertificate>,
    /// Set when the coset offset is not dual-integral against the lattice.
    pub dual_warning: Option<String>,
    pub n_vectors: usize,
    pub dim: usize,
    /// Estimated smallest eigenvalue of the pulled-back majorant; feeds
    /// the tail-bound point counts.
    pub lambda_min: f64,
}

/// Exact coefficients c(m) = sum of the summand weight over enumerated
/// coset points with (x,x)/2 = m <= truncation. The origin contributes
/// nothing: the weight is evaluated against moved points only, matching
/// the support statement for the series.
pub fn theta_coefficients(
    config: &ConeConfig,
    lattice: &Lattice,
    truncation: &Rat,
    bound: &Rat,
    reference: Option<&ReferenceWeight>,
) -> Result<QExpansion> {
    if !bound.is_positive() {
        return Err(Error::Precondition("enumeration bound must be positive".into()));
    }
    let majorant = crate::quadform::build_majorant(&lattice.ambient)?;
    let owned;
    let reference = match reference {
        Some(r) => r,
        None => {
            owned = reference_weight(config)?;
            &owned
        }
    };

    let points = enumerate_lattice_points(lattice, &majorant, bound)?;
    let coeffs = aggregate(config, reference, &points, truncation);

    let certificate = if check_all(config).overall { Some(compute_r_inf(config)?) } else { None };
    let two_m = truncation * rat_int(2);
    let certified = certificate
        .as_ref()
        .and_then(|c| c.effective_ratio())
        .map(|rho| rho > 0.0 && rho * to_f64(bound) >= to_f64(&two_m))
        .unwrap_or(false);

    let (completeness, coeffs) = if certified {
        (Completeness::Certified, coeffs)
    } else {
        let doubled = enumerate_lattice_points(lattice, &majorant, &(bound * rat_int(2)))?;
        let coeffs2 = aggregate(config, reference, &doubled, truncation);
        if coeffs2 == coeffs {
            (Completeness::DoublingChecked, coeffs)
        } else {
            (Completeness::Heuristic, coeffs2)
        }
    };

    let q = lattice.basis.transpose().mul(&majorant.gram_pos)?.mul(&lattice.basis)?;
    Ok(QExpansion {
        coeffs,
        truncation: truncation.clone(),
        bound: bound.clone(),
        completeness,
        config_digest: digest(config, lattice, truncation, bound),
        certificate,
        dual_warning: dual_warning(lattice),
        n_vectors: config.len(),
        dim: lattice.ambient.dim(),
        lambda_min: min_eigenvalue_estimate(&q),
    })
}

fn aggregate(
    config: &ConeConfig,
    reference: &ReferenceWeight,
    points: &[LatticePoint],
    truncation: &Rat,
) -> BTreeMap<Rat, i64> {
    let two = rat_int(2);
    let weights = exec::map_slice(points, |p| {
        if p.x.iter().all(|v| v.is_zero()) {
            return None;
        }
        let m = &p.norm / &two;
        if m > *truncation {
            return None;
        }
        let w = evaluate_w(config, &p.x) - reference.w_c;
        (w != 0).then_some((m, w))
    });
    let mut coeffs: BTreeMap<Rat, i64> = BTreeMap::new();
    for (m, w) in weights.into_iter().flatten() {
        *coeffs.entry(m).or_insert(0) += w;
    }
    coeffs.retain(|_, c| *c != 0);
    coeffs
}

fn digest(config: &ConeConfig, lattice: &Lattice, truncation: &Rat, bound: &Rat) -> String {
    let mut file = ConeConfigFile::from_config(config);
    file.basis = Some(
        lattice
            .basis
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(crate::rat::RatStr).collect())
            .collect(),
    );
    file.mu = Some(lattice.coset_offset.iter().cloned().map(crate::rat::RatStr).collect());
    let mut h = Sha256::new();
    h.update(serde_json::to_string(&file).expect("config serialization").as_bytes());
    h.update(rat_to_string(truncation).as_bytes());
    h.update(b";");
    h.update(rat_to_string(bound).as_bytes());
    format!("{:x}", h.finalize())
}

fn dual_warning(lattice: &Lattice) -> Option<String> {
    // Dual-integrality of mu: (mu, e) in Z for every lattice generator e.
    let mu_ambient = lattice.basis.mul_vec(&lattice.coset_offset).ok()?;
    for j in 0..lattice.ambient.dim() {
        let gen: RatVec = (0..lattice.ambient.dim())
            .map(|i| lattice.basis[(i, j)].clone())
            .collect();
        let p = lattice.ambient.inner(&mu_ambient, &gen).ok()?;
        if !p.denom().is_one() {
            return Some(format!(
                "coset offset is not dual-integral: pairing {} with generator {}",
                rat_to_string(&p),
                j + 1
            ));
        }
    }
    None
}

/// Power iteration on the f64 inverse; an estimate, recorded as such.
fn min_eigenvalue_estimate(q: &RatMat) -> f64 {
    let n = q.rows;
    let Ok(inv) = q.inverse() else { return f64::NAN };
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| inv.row(i).iter().map(to_f64).collect())
        .collect();
    let mut v = vec![1.0f64; n];
    let mut lambda = 0.0;
    for _ in 0..60 {
        let w: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return f64::NAN;
        }
        lambda = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    1.0 / lambda
}

#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    /// Bound on the dropped tail when a support-ratio certificate exists.
    pub tail_bound: Option<f64>,
}

/// Sums c(m) e^{2 pi i tau m} in increasing exponent order; tau = u + iv
/// with v > 0, so terms decay as e^{-2 pi v m}.
pub fn theta_evaluate(expansion: &QExpansion, u: f64, v: f64) -> Result<Evaluation> {
    if v <= 0.0 {
        return Err(Error::Precondition("evaluation needs v > 0".into()));
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (m, &c) in &expansion.coeffs {
        let mf = to_f64(m);
        let r = (-2.0 * std::f64::consts::PI * v * mf).exp();
        let ph = 2.0 * std::f64::consts::PI * u * mf;
        value += Complex64::new(r * ph.cos(), r * ph.sin()) * c as f64;
    }
    Ok(Evaluation { value, tail_bound: tail_bound(expansion, v) })
}

/// Bound on the terms outside the enumeration ball: every supported x
/// beyond majorant norm B has exponent at least rho * B / 2, the weight
/// is bounded by 2N, and the per-shell point count is bounded through
/// the smallest majorant eigenvalue.
pub fn tail_bound(expansion: &QExpansion, v: f64) -> Option<f64> {
    let rho = expansion.certificate.as_ref()?.effective_ratio()?;
    if !(rho > 0.0) || !expansion.lambda_min.is_finite() || expansion.lambda_min <= 0.0 {
        return None;
    }
    let b = to_f64(&expansion.bound);
    let dim = expansion.dim as i32;
    let weight_cap = 2.0 * expansion.n_vectors as f64;
    let mut total = 0.0;
    let mut t = b.floor().max(0.0);
    for _ in 0..100_000 {
        let count = (2.0 * ((t + 1.0) / expansion.lambda_min).sqrt() + 1.0).powi(dim);
        let term = weight_cap * count * (-std::f64::consts::PI * v * rho * t / 2.0).exp();
        total += term;
        if term < 1e-300 {
            break;
        }
        t += 1.0;
    }
    Some(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceWitness {
    pub coords: Vec<i64>,
    #[serde(skip)]
    pub x: RatVec,
    pub norm: String,
    pub phi: i64,
}

/// Scans the coordinate box [-radius, radius]^n for lattice points of
/// negative norm carrying nonzero summand weight. Each hit spawns the
/// ray of its positive multiples, so a nonempty result certifies
/// termwise divergence of the series.
///
/// Requires the first two incidence conditions. Without a supplied
/// reference the weight baseline comes from the audited search on valid
/// configurations, or from the first sampled negative regular vector
/// otherwise (no canonical baseline exists when the third condition
/// fails; nonemptiness is what matters).
pub fn divergence_witness_scan(
    config: &ConeConfig,
    lattice: &Lattice,
    radius: i64,
    reference: Option<&ReferenceWeight>,
) -> Result<Vec<DivergenceWitness>> {
    let report = check_all(config);
    if report.i1.iter().any(|x| !x.pass) || report.i2.iter().any(|x| !x.pass) {
        return Err(Error::Precondition(
            "divergence scan requires the first two incidence conditions".into(),
        ));
    }
    let owned;
    let reference = match reference {
        Some(r) => r,
        None if report.overall => {
            owned = reference_weight(config)?;
            &owned
        }
        None => {
            let witness = negative_regular_samples(config, 1, 0x5CA7)?.pop().unwrap();
            owned = ReferenceWeight::explicit(config, witness)?;
            &owned
        }
    };

    let n = lattice.ambient.dim();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    let w_c = reference.w_c;
    let found = exec::map_indexed(total, |flat| {
        let mut rem = flat;
        let coords: Vec<i64> = (0..n)
            .map(|_| {
                let c = (rem % side) as i64 - radius;
                rem /= side;
                c
            })
            .collect();
        let kr: RatVec = coords.iter().map(|&v| rat_int(v)).collect();
        let x = lattice.point(&kr).ok()?;
        if x.iter().all(|v| v.is_zero()) {
            return None;
        }
        let norm = lattice.ambient.norm(&x).ok()?;
        if !norm.is_negative() {
            return None;
        }
        let phi = evaluate_w(config, &x) - w_c;
        (phi != 0).then(|| DivergenceWitness {
            coords,
            norm: rat_to_string(&norm),
            phi,
            x,
        })
    });
    let mut out: Vec<DivergenceWitness> = found.into_iter().flatten().collect();
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::fixtures::{space_112, triple_invalid, triple_valid};
    use crate::matrix::int_vec;
    use crate::quadform::build_majorant;
    use crate::rat::rat;

    fn standard_lattice(mu: RatVec) -> Lattice {
        Lattice::standard(space_112(), mu).unwrap()
    }

    #[test]
    fn unit_ball_counts() {
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let maj = build_majorant(&lat.ambient).unwrap();
        assert_eq!(enumerate_lattice_points(&lat, &maj, &rat_int(1)).unwrap().len(), 7);
        assert_eq!(enumerate_lattice_points(&lat, &maj, &rat_int(2)).unwrap().len(), 19);
    }

    #[test]
    fn half_offset_ball() {
        let lat = standard_lattice(vec![rat_int(0), rat_int(0), rat(1, 2)]);
        let maj = build_majorant(&lat.ambient).unwrap();
        let pts = enumerate_lattice_points(&lat, &maj, &rat(1, 4)).unwrap();
        assert_eq!(pts.len(), 2);
        let zs: Vec<Rat> = pts.iter().map(|p| p.x[2].clone()).collect();
        assert!(zs.contains(&rat(1, 2)) && zs.contains(&rat(-1, 2)));
    }

    #[test]
    fn enumeration_matches_box_scan() {
        // Sheared basis and fractional offset exercise the recursion.
        let basis = RatMat::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ])
        .unwrap();
        let mu = vec![rat(1, 3), rat_int(0), rat(1, 2)];
        let lat = Lattice::with_basis(space_112(), basis, mu).unwrap();
        let maj = build_majorant(&lat.ambient).unwrap();
        let b = rat_int(9);
        let fast = enumerate_lattice_points(&lat, &maj, &b).unwrap();
        let slow = box_scan(&lat, &maj, &b, 12).unwrap();
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
    }

    #[test]
    fn coefficients_pin_support() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        let mut expect = BTreeMap::new();
        for k in 1i64..=5 {
            expect.insert(rat(k * k, 2), 2);
        }
        assert_eq!(e.coeffs, expect);
        assert_eq!(e.completeness, Completeness::Certified);
        assert!(e.dual_warning.is_none());
    }

    #[test]
    fn coefficients_half_offset() {
        let c = triple_valid();
        let lat = standard_lattice(vec![rat_int(0), rat_int(0), rat(1, 2)]);
        let e = theta_coefficients(&c, &lat, &rat(81, 8), &rat(81, 4), None).unwrap();
        let mut expect = BTreeMap::new();
        for k in 0i64..=4 {
            let half = rat(2 * k + 1, 2);
            expect.insert(&half * &half / rat_int(2), 2);
        }
        assert_eq!(e.coeffs, expect);
        assert_eq!(e.completeness, Completeness::Certified);
        assert!(e.dual_warning.is_some());
    }

    #[test]
    fn no_nonpositive_exponents() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        assert!(e.coeffs.keys().all(|m| m.is_positive()));
    }

    #[test]
    fn coefficients_even_for_zero_offset() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        assert!(e.coeffs.values().all(|c| c % 2 == 0));
    }

    #[test]
    fn evaluation_at_i() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        let ev = theta_evaluate(&e, 0.0, 1.0).unwrap();
        // 2(e^{-pi} + e^{-4pi} + ...) summed over the five coefficients.
        let expect: f64 = (1i64..=5)
            .map(|k| 2.0 * (-std::f64::consts::PI * (k * k) as f64).exp())
            .sum();
        assert!((ev.value.re - expect).abs() < 1e-12);
        assert!(ev.value.im.abs() < 1e-15);
        assert!((ev.value.re - 0.08643478).abs() < 1e-6);
        let tail = ev.tail_bound.unwrap();
        assert!(tail > 0.0 && tail < 1e-6);
    }

    #[test]
    fn evaluation_monotone_in_v() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        let a = theta_evaluate(&e, 0.0, 0.5).unwrap().value.norm();
        let b = theta_evaluate(&e, 0.0, 1.0).unwrap().value.norm();
        assert!(a > b);
        assert!(theta_evaluate(&e, 0.0, -1.0).is_err());
    }

    #[test]
    fn empty_expansion_evaluates_to_zero() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let mut e = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        e.coeffs.clear();
        let ev = theta_evaluate(&e, 0.3, 2.0).unwrap();
        assert_eq!(ev.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn digest_changes_with_input() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let e1 = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        let e2 = theta_coefficients(&c, &lat, &rat_int(8), &rat_int(26), None).unwrap();
        assert_ne!(e1.config_digest, e2.config_digest);
        let e3 = theta_coefficients(&c, &lat, &rat_int(13), &rat_int(26), None).unwrap();
        assert_eq!(e1.config_digest, e3.config_digest);
    }

    #[test]
    fn divergence_scan_valid_empty() {
        let c = triple_valid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        assert!(divergence_witness_scan(&c, &lat, 8, None).unwrap().is_empty());
        assert!(divergence_witness_scan(&c, &lat, 0, None).unwrap().is_empty());
    }

    #[test]
    fn divergence_scan_finds_witness() {
        let b = triple_invalid();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        let r = ReferenceWeight::explicit(&b, int_vec(&[2, -1, 0])).unwrap();
        let hits = divergence_witness_scan(&b, &lat, 5, Some(&r)).unwrap();
        let target = hits.iter().find(|w| w.coords == vec![2, 1, 0]).unwrap();
        assert_eq!(target.norm, "-5");
        assert_eq!(target.phi, 4);
        // The self-derived baseline also certifies divergence.
        assert!(!divergence_witness_scan(&b, &lat, 5, None).unwrap().is_empty());
    }

    #[test]
    fn scan_requires_first_two_conditions() {
        // A positive-norm cone vector violates the first condition.
        let bad = ConeConfig::new(
            space_112(),
            vec![int_vec(&[0, 0, 1]), int_vec(&[0, 1, 0]), int_vec(&[1, 0, 0])],
        )
        .unwrap();
        let lat = standard_lattice(int_vec(&[0, 0, 0]));
        assert!(matches!(
            divergence_witness_scan(&bad, &lat, 2, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ldl_reconstructs() {
        let q = RatMat::from_rows(vec![
            vec![rat_int(4), rat_int(2), rat_int(0)],
            vec![rat_int(2), rat_int(3), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(5)],
        ])
        .unwrap();
        let f = ldl(&q).unwrap();
        let back = f.l.mul(&RatMat::diagonal(&f.d)).unwrap().mul(&f.l.transpose()).unwrap();
        assert_eq!(back, q);
        // Indefinite input is rejected.
        let bad = RatMat::diagonal(&[rat_int(1), rat_int(-1)]);
        assert!(ldl(&bad).is_err());
    }
}
