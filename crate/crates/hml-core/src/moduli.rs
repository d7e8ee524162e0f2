//! Strata combinatorics and explicit Higgs-field representatives.
//!
//! Partition/weight arithmetic is exact (`Ratio<i64>`); complex arithmetic
//! only enters when a field or gauge is evaluated at a point.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::mat2::Mat2;
use crate::{c64, C64};

pub type Rat = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuliError {
    /// `K` must be at least the stated minimum for the operation.
    ArityTooSmall { k: u32, min: u32 },
    /// Partition parts do not sum to the stated total.
    BadPartitionSum,
    /// A gauge matrix is singular at the evaluation point.
    SingularGauge,
    /// Evaluation at a zero of the relevant polynomial data.
    AtSingularPoint,
}

impl fmt::Display for ModuliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliError::ArityTooSmall { k, min } => {
                write!(f, "rank K = {k} below the minimum {min} for this operation")
            }
            ModuliError::BadPartitionSum => write!(f, "partition parts do not sum to N"),
            ModuliError::SingularGauge => write!(f, "gauge matrix is singular at this point"),
            ModuliError::AtSingularPoint => {
                write!(f, "evaluation point is a zero of the defining polynomial")
            }
        }
    }
}

impl core::error::Error for ModuliError {}

/// A composition of `N` into `K` nonnegative parts, considered up to cyclic
/// rotation; the stored representative is the lexicographically greatest
/// rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicPartition {
    parts: Vec<u32>,
    n_total: u32,
}

impl CyclicPartition {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(!parts.is_empty(), "a partition needs at least one part");
        let n_total = parts.iter().sum();
        let mut best = parts.clone();
        for r in 1..parts.len() {
            let mut rot = parts[r..].to_vec();
            rot.extend_from_slice(&parts[..r]);
            if rot > best {
                best = rot;
            }
        }
        CyclicPartition { parts: best, n_total }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn k(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }
}

impl fmt::Display for CyclicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// One representative per cyclic-equivalence class of compositions of `n`
/// into `k` nonnegative parts.
pub fn enumerate_cyclic_partitions(k: u32, n: u32) -> Result<BTreeSet<CyclicPartition>, ModuliError> {
    if k == 0 {
        return Err(ModuliError::ArityTooSmall { k, min: 1 });
    }
    let mut out = BTreeSet::new();
    let mut buf = vec![0u32; k as usize];
    fn rec(buf: &mut [u32], idx: usize, left: u32, out: &mut BTreeSet<CyclicPartition>) {
        if idx + 1 == buf.len() {
            buf[idx] = left;
            out.insert(CyclicPartition::new(buf.to_vec()));
            return;
        }
        for v in 0..=left {
            buf[idx] = v;
            rec(buf, idx + 1, left - v, out);
        }
    }
    rec(&mut buf, 0, n, &mut out);
    Ok(out)
}

/// Parabolic weights `α = (α₁,…,α_K)` with `Σαᵢ = 0` and
/// `bᵢ = αᵢ − α_{i+1} + N/K` (indices cyclic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub alphas: Vec<Rat>,
    pub k: u32,
    pub n: u32,
}

/// The unique zero-sum weight vector attached to a cyclic partition.
pub fn partition_to_weights(b: &CyclicPartition) -> WeightVector {
    let k = b.k() as i64;
    let n = b.n_total() as i64;
    let nk = Rat::new(n, k);
    // αᵢ = α₁ − Σ_{j<i}(bⱼ − N/K); Σα = 0 fixes α₁.
    let mut partial = Vec::with_capacity(b.parts().len());
    let mut s = Rat::new(0, 1);
    partial.push(s);
    for &bj in &b.parts()[..b.parts().len() - 1] {
        s += Rat::from_integer(bj as i64) - nk;
        partial.push(s);
    }
    let alpha1 = partial.iter().sum::<Rat>() / Rat::from_integer(k);
    let alphas = partial.into_iter().map(|si| alpha1 - si).collect();
    WeightVector { alphas, k: b.k(), n: b.n_total() }
}

/// Sum of the weights (zero for the SL strata by construction).
pub fn parabolic_degree(w: &WeightVector) -> Rat {
    w.alphas.iter().sum()
}

/// Recover the partition from a weight vector, `bᵢ = αᵢ − α_{i+1} + N/K`.
/// Errors when the result is not a nonnegative-integer composition of `N`.
pub fn weights_to_partition(w: &WeightVector) -> Result<CyclicPartition, ModuliError> {
    let k = w.k as usize;
    let nk = Rat::new(w.n as i64, w.k as i64);
    let mut parts = Vec::with_capacity(k);
    for i in 0..k {
        let b = w.alphas[i] - w.alphas[(i + 1) % k] + nk;
        if !b.is_integer() || *b.numer() < 0 {
            return Err(ModuliError::BadPartitionSum);
        }
        parts.push(b.to_integer() as u32);
    }
    if parts.iter().sum::<u32>() != w.n {
        return Err(ModuliError::BadPartitionSum);
    }
    Ok(CyclicPartition::new(parts))
}

/// Per-coefficient maximum degrees `⌊N(i−1)/K − 1⌋` for `i = 2..K` (`None`
/// when the coefficient is absent) and the total complex dimension of the
/// Hitchin base.
pub fn hitchin_base_dimension(k: u32, n: u32) -> Result<(Vec<Option<u32>>, u32), ModuliError> {
    if k < 2 {
        return Err(ModuliError::ArityTooSmall { k, min: 2 });
    }
    let mut degrees = Vec::new();
    let mut dim = 0u32;
    for i in 2..=k {
        let bound = Rat::new((n as i64) * (i as i64 - 1), k as i64) - Rat::from_integer(1);
        let dmax = bound.floor().to_integer();
        if dmax < 0 {
            degrees.push(None);
        } else {
            degrees.push(Some(dmax as u32));
            dim += dmax as u32 + 1;
        }
    }
    Ok((degrees, dim))
}

/// Polynomial in one complex variable, coefficients ascending in degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(v: C64) -> Self {
        Poly(vec![v])
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = c64(0.0, 0.0);
        for &coef in self.0.iter().rev() {
            acc = acc * z + coef;
        }
        acc
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| c.norm() != 0.0)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![c64(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &x) in self.0.iter().enumerate() {
            for (j, &y) in other.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![c64(0.0, 0.0); n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = self.0.get(i).copied().unwrap_or_else(|| c64(0.0, 0.0));
            let y = other.0.get(i).copied().unwrap_or_else(|| c64(0.0, 0.0));
            *o = x + y;
        }
        Poly(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

/// Closed-form representative of a point of the moduli space: the small
/// stratum carries `φ_u = [[0, z³+u], [1, 0]] dz`, the big stratum
/// `φ_{ω,γ} = [[γ, z²+zω+ω²], [z−ω, −γ]] dz` (the (1,2) entry stored with
/// the removable singularity at `z = ω` eliminated).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HiggsFieldSpec {
    Small { u: C64 },
    Big { gamma: C64, omega: C64 },
}

impl HiggsFieldSpec {
    /// The fiber invariant `u` of the Hitchin fibration: `u` itself on the
    /// small stratum, `γ² − ω³` on the big one.
    pub fn fiber_invariant(&self) -> C64 {
        match *self {
            HiggsFieldSpec::Small { u } => u,
            HiggsFieldSpec::Big { gamma, omega } => gamma * gamma - omega * omega * omega,
        }
    }

    /// dz-coefficient matrix at `z`.
    pub fn eval(&self, z: C64) -> Mat2 {
        match *self {
            HiggsFieldSpec::Small { u } => {
                Mat2::new(c64(0.0, 0.0), z * z * z + u, c64(1.0, 0.0), c64(0.0, 0.0))
            }
            HiggsFieldSpec::Big { gamma, omega } => {
                let (p, q) = pq_factors(omega, z);
                Mat2::new(gamma, p, q, -gamma)
            }
        }
    }

    /// Zeros of `det φ`, i.e. of `z³ + u`; on the big stratum these are the
    /// cube roots of `ω³ = −u`, returned exactly as rotations of `ω`.
    pub fn det_roots(&self) -> [C64; 3] {
        match *self {
            HiggsFieldSpec::Small { u } => cube_roots(-u),
            HiggsFieldSpec::Big { omega, .. } => {
                let w = c64(-0.5, 0.75f64.sqrt());
                [omega, omega * w, omega * w * w]
            }
        }
    }

    /// Entrywise polynomial form, used for exact characteristic polynomials.
    fn entry_polys(&self) -> [Poly; 4] {
        match *self {
            HiggsFieldSpec::Small { u } => [
                Poly::zero(),
                Poly(vec![u, c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]),
                Poly::constant(c64(1.0, 0.0)),
                Poly::zero(),
            ],
            HiggsFieldSpec::Big { gamma, omega } => [
                Poly::constant(gamma),
                Poly(vec![omega * omega, omega, c64(1.0, 0.0)]),
                Poly(vec![-omega, c64(1.0, 0.0)]),
                Poly::constant(-gamma),
            ],
        }
    }
}

/// The big-stratum off-diagonal factors `P = (z³−ω³)/(z−ω) = z²+zω+ω²` and
/// `Q = z−ω`.
pub fn pq_factors(omega: C64, z: C64) -> (C64, C64) {
    (z * z + z * omega + omega * omega, z - omega)
}

/// The three cube roots of `w`, principal root first.
pub fn cube_roots(w: C64) -> [C64; 3] {
    let r = w.norm().cbrt();
    let t = w.arg() / 3.0;
    let root = |t: f64| c64(r * t.cos(), r * t.sin());
    let tau = 2.0 * core::f64::consts::PI / 3.0;
    [root(t), root(t + tau), root(t + tau + tau)]
}

/// Characteristic polynomial `λ^K + Σ Pᵢ(z) λ^{K−i} dzⁱ`; `coeffs[i-1]` is
/// the full coefficient `Pᵢ` of `λ^{K−i}` (for the admissible base the
/// deviation of `P_K` from `−z^N` is bounded in degree by `N(i−1)/K − 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolynomial {
    pub k: u32,
    pub coeffs: Vec<Poly>,
}

impl CharPolynomial {
    /// `λ² − (z³ + u) dz²` with `u` the fiber invariant.
    pub fn eval_at(&self, lambda: C64, z: C64) -> C64 {
        let mut acc = lambda.powu(self.k);
        let mut pow = lambda.powu(self.k - 1);
        for p in &self.coeffs {
            acc += p.eval(z) * pow;
            pow /= lambda;
        }
        acc
    }
}

/// Exact characteristic polynomial `det(λ − φ(z))` computed from the
/// polynomial entries: `λ² − tr φ · λ + det φ`.
pub fn char_poly(spec: &HiggsFieldSpec) -> CharPolynomial {
    let [a, b, c, d] = spec.entry_polys();
    let tr = a.add(&d).neg();
    let det = a.mul(&d).add(&b.mul(&c).neg());
    CharPolynomial { k: 2, coeffs: vec![tr, det] }
}

/// Conjugation `g φ g⁻¹` at a point. Errors when `g` is singular.
pub fn apply_gauge(g: &Mat2, phi: &Mat2) -> Result<Mat2, ModuliError> {
    let ginv = g.inverse().ok_or(ModuliError::SingularGauge)?;
    Ok(*g * *phi * ginv)
}

/// `z^{N/K}` on the principal branch, rotated to the `branch`-th K-th root.
pub fn zpow_branch(z: C64, n: u32, k: u32, branch: i32) -> C64 {
    let w = z.powf(n as f64 / k as f64);
    let t = 2.0 * core::f64::consts::PI * (n as f64) * (branch as f64) / (k as f64);
    w * c64(t.cos(), t.sin())
}

/// Diagonal entries of the model field `diag(e^{2πi/K}, …, 1) z^{N/K}`.
/// Errors at `z = 0` where the fractional power branches collide.
pub fn model_higgs_field(k: u32, n: u32, z: C64, branch: i32) -> Result<Vec<C64>, ModuliError> {
    if k == 0 {
        return Err(ModuliError::ArityTooSmall { k, min: 1 });
    }
    if z.norm() == 0.0 {
        return Err(ModuliError::AtSingularPoint);
    }
    let zp = zpow_branch(z, n, k, branch);
    let mut out = Vec::with_capacity(k as usize);
    for j in 1..=k {
        let t = 2.0 * core::f64::consts::PI * (j as f64) / (k as f64);
        out.push(c64(t.cos(), t.sin()) * zp);
    }
    Ok(out)
}

/// The frame change `−½ [[(z³+u)^{−1/2}, −1], [−1, −(z³+u)^{1/2}]]` that
/// diagonalises `φ_u` to `diag(∓(z³+u)^{1/2})` away from the zeros of the
/// determinant. `branch` flips the square root.
pub fn trivializing_gauge(u: C64, z: C64, branch: i32) -> Result<Mat2, ModuliError> {
    let q = z * z * z + u;
    if q.norm() < 1e-300 {
        return Err(ModuliError::AtSingularPoint);
    }
    let mut s = q.sqrt();
    if branch.rem_euclid(2) == 1 {
        s = -s;
    }
    let m = Mat2::new(s.finv(), c64(-1.0, 0.0), c64(-1.0, 0.0), -s);
    Ok(m.scale_re(-0.5))
}

/// The printed inter-stratum gauge `i [[γ/ω, ω+z], [0, −γ/ω]]`.
///
/// The limit claim attached to it is examined by tests; conjugating with
/// this matrix alone rescales the off-diagonal entries, so the literal
/// entrywise limit fails while the filtration-compatible rescaling
/// `diag(ω^{1/2}, ω^{−1/2})` composed with it exhibits the trend.
pub fn big_to_small_gauge(gamma: C64, omega: C64, z: C64) -> Result<Mat2, ModuliError> {
    if omega.norm() == 0.0 {
        return Err(ModuliError::AtSingularPoint);
    }
    let i = c64(0.0, 1.0);
    let r = gamma / omega;
    Ok(Mat2::new(i * r, i * (omega + z), c64(0.0, 0.0), -i * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_representative_is_greatest_rotation() {
        let p = CyclicPartition::new(vec![0, 3]);
        assert_eq!(p.parts(), &[3, 0]);
        let p = CyclicPartition::new(vec![1, 2]);
        assert_eq!(p.parts(), &[2, 1]);
        let p = CyclicPartition::new(vec![1, 2, 0]);
        assert_eq!(p.parts(), &[2, 0, 1]);
    }

    #[test]
    fn enumerate_2_3() {
        let set = enumerate_cyclic_partitions(2, 3).unwrap();
        let parts: Vec<_> = set.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&vec![3, 0]));
        assert!(parts.contains(&vec![2, 1]));
    }

    #[test]
    fn enumerate_1_5_and_3_3() {
        let set = enumerate_cyclic_partitions(1, 5).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.iter().next().unwrap().parts(), &[5]);

        let set = enumerate_cyclic_partitions(3, 3).unwrap();
        let parts: Vec<_> = set.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(parts.len(), 4);
        for want in [vec![3, 0, 0], vec![2, 1, 0], vec![2, 0, 1], vec![1, 1, 1]] {
            assert!(parts.contains(&want), "missing class {want:?}");
        }
    }

    #[test]
    fn rejects_zero_k() {
        assert!(enumerate_cyclic_partitions(0, 3).is_err());
    }

    #[test]
    fn weights_for_2_3() {
        let w = partition_to_weights(&CyclicPartition::new(vec![3, 0]));
        assert_eq!(w.alphas, vec![Rat::new(3, 4), Rat::new(-3, 4)]);
        let w = partition_to_weights(&CyclicPartition::new(vec![2, 1]));
        assert_eq!(w.alphas, vec![Rat::new(1, 4), Rat::new(-1, 4)]);
        let w = partition_to_weights(&CyclicPartition::new(vec![1, 1]));
        assert_eq!(w.alphas, vec![Rat::new(0, 1), Rat::new(0, 1)]);
    }

    #[test]
    fn parabolic_degree_is_zero_sum() {
        for parts in [vec![3, 0], vec![2, 1], vec![4, 2, 1, 1]] {
            let w = partition_to_weights(&CyclicPartition::new(parts));
            assert_eq!(parabolic_degree(&w), Rat::new(0, 1));
        }
        let w = WeightVector {
            alphas: vec![Rat::new(1, 2), Rat::new(1, 3), Rat::new(-5, 6)],
            k: 3,
            n: 0,
        };
        assert_eq!(parabolic_degree(&w), Rat::new(0, 1));
    }

    #[test]
    fn weight_partition_roundtrip_exact() {
        for k in 1..=5u32 {
            for n in 0..=8u32 {
                for p in enumerate_cyclic_partitions(k, n).unwrap() {
                    let w = partition_to_weights(&p);
                    assert_eq!(weights_to_partition(&w).unwrap(), p, "k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn base_dimensions() {
        assert_eq!(hitchin_base_dimension(2, 3).unwrap(), (vec![Some(0)], 1));
        assert_eq!(hitchin_base_dimension(2, 1).unwrap(), (vec![None], 0));
        assert_eq!(hitchin_base_dimension(3, 3).unwrap(), (vec![Some(0), Some(1)], 3));
        assert!(hitchin_base_dimension(1, 3).is_err());
    }

    #[test]
    fn higgs_eval_points() {
        let phi = HiggsFieldSpec::Small { u: c64(0.0, 0.0) }.eval(c64(2.0, 0.0));
        assert_eq!(phi.b, c64(8.0, 0.0));
        assert_eq!(phi.c, c64(1.0, 0.0));
        assert_eq!(phi.a, c64(0.0, 0.0));

        // removable singularity at z = ω
        let spec = HiggsFieldSpec::Big { gamma: c64(0.3, 0.1), omega: c64(1.0, 0.0) };
        let phi = spec.eval(c64(1.0, 0.0));
        assert!((phi.b - c64(3.0, 0.0)).norm() < 1e-15);

        // det = −(z³+u) with u = γ²−ω³
        let spec = HiggsFieldSpec::Big { gamma: c64(2.0, 0.0), omega: c64(1.0, 0.0) };
        let phi = spec.eval(c64(1.0, 0.0));
        assert!((phi.det() - c64(-4.0, 0.0)).norm() < 1e-14);
        assert_eq!(spec.fiber_invariant(), c64(3.0, 0.0));
    }

    #[test]
    fn char_poly_exact() {
        let cp = char_poly(&HiggsFieldSpec::Small { u: c64(5.0, 0.0) });
        assert_eq!(cp.coeffs[0].degree(), None); // traceless
        assert_eq!(cp.coeffs[1].0[0], c64(-5.0, 0.0));
        assert_eq!(cp.coeffs[1].0[3], c64(-1.0, 0.0));

        let cp0 = char_poly(&HiggsFieldSpec::Big { gamma: c64(0.0, 0.0), omega: c64(0.0, 0.0) });
        assert_eq!(cp0.coeffs[1].eval(c64(2.0, 0.0)), c64(-8.0, 0.0));

        // Big(γ=2, ω=1): λ² − (z³+3)dz², exactly.
        let cp = char_poly(&HiggsFieldSpec::Big { gamma: c64(2.0, 0.0), omega: c64(1.0, 0.0) });
        assert_eq!(cp.coeffs[0].degree(), None);
        let p2 = &cp.coeffs[1];
        assert_eq!(p2.eval(c64(0.0, 0.0)), c64(-3.0, 0.0));
        assert_eq!(p2.0[3], c64(-1.0, 0.0));
        assert_eq!(p2.0[1], c64(0.0, 0.0));
        assert_eq!(p2.0[2], c64(0.0, 0.0));
    }

    #[test]
    fn model_field_values() {
        let d = model_higgs_field(2, 3, c64(1.0, 0.0), 0).unwrap();
        assert!((d[0] - c64(-1.0, 0.0)).norm() < 1e-15);
        assert!((d[1] - c64(1.0, 0.0)).norm() < 1e-15);

        let d = model_higgs_field(2, 3, c64(4.0, 0.0), 0).unwrap();
        assert!((d[0] - c64(-8.0, 0.0)).norm() < 1e-13);
        assert!((d[1] - c64(8.0, 0.0)).norm() < 1e-13);

        let d = model_higgs_field(1, 4, c64(0.5, 0.5), 0).unwrap();
        let z = c64(0.5, 0.5);
        assert!((d[0] - z * z * z * z).norm() < 1e-14);

        assert!(model_higgs_field(2, 3, c64(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn trivializing_gauge_values() {
        let g = trivializing_gauge(c64(0.0, 0.0), c64(1.0, 0.0), 0).unwrap();
        assert_eq!(g.a, c64(-0.5, 0.0));
        assert_eq!(g.b, c64(0.5, 0.0));
        assert_eq!(g.c, c64(0.5, 0.0));
        assert_eq!(g.d, c64(0.5, 0.0));
        // direct 2×2 determinant: ad − bc = (−¼) − ¼ = −½
        assert!((g.det() - c64(-0.5, 0.0)).norm() < 1e-15);
        assert!(trivializing_gauge(c64(-1.0, 0.0), c64(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn trivializing_gauge_diagonalizes() {
        let u = c64(1.0, 0.0);
        let z = c64(2.0, 0.0);
        let g = trivializing_gauge(u, z, 0).unwrap();
        let phi = HiggsFieldSpec::Small { u }.eval(z);
        let d = apply_gauge(&g, &phi).unwrap();
        // eigenvalues ±3 on the diagonal, off-diagonal annihilated
        assert!(d.b.norm() < 1e-13 && d.c.norm() < 1e-13);
        assert!((d.a + c64(3.0, 0.0)).norm() < 1e-13);
        assert!((d.d - c64(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn gauge_preserves_determinant() {
        let g = Mat2::new(c64(1.0, 1.0), c64(0.2, -0.4), c64(0.0, 0.3), c64(2.0, -1.0));
        let spec = HiggsFieldSpec::Small { u: c64(0.3, 0.7) };
        let z = c64(1.2, -0.4);
        let phi = spec.eval(z);
        let t = apply_gauge(&g, &phi).unwrap();
        assert!((t.det() - phi.det()).norm() < 1e-12);

        let id = Mat2::identity();
        assert!(apply_gauge(&id, &phi).unwrap().dist_max(&phi) < 1e-15);

        let sing = Mat2::new(c64(1.0, 0.0), c64(2.0, 0.0), c64(2.0, 0.0), c64(4.0, 0.0));
        assert!(apply_gauge(&sing, &phi).is_err());
    }
}
