use num_rational::BigRational;
use num_traits::Zero;

use super::cyclotomic::Cyclotomic;
use super::lattice::{LatticeConeSet, Moments};
use crate::error::{Error, Result};
use crate::quadfield::FieldElem;
use crate::scalar::Scalar;

type CycQ = Cyclotomic<BigRational>;
type CycF = Cyclotomic<FieldElem>;

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `{m l} = Π (-1)^{l_i - 1} C(m_i - 1, l_i - 1)`.
pub fn cn_coefficient(m: &[u32], l: &[u32]) -> i64 {
    m.iter()
        .zip(l)
        .map(|(&mi, &li)| if (li - 1) % 2 == 0 { 1 } else { -1 } * binom(mi - 1, li - 1))
        .product()
}

/// Multi-indices with entries in `1..=bound`.
pub(crate) fn multi_indices(r: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=bound).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn below(m: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &mi in m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=mi).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// `Π_i (1 - ζ^{j_i})^{-m_i}`.
fn inv_product(q: u32, j: &[i64], m: &[u32]) -> Result<CycQ> {
    let mut acc = CycQ::one(q);
    for (&ji, &mi) in j.iter().zip(m) {
        let inv = CycQ::inv_one_minus(q, ji).ok_or_else(|| Error::NotGood("xi_i = 1".into()))?;
        acc = &acc * &inv.pow(mi);
    }
    Ok(acc)
}

/// `ζ(-k, w, x, ξ)` (or `ζ_N` when `with_norm`) by the finite double sum, with
/// `ξ_i = ζ_q^{j_i}` and `z = x·w`.
pub fn lemma_cn_value(k: u32, w: &[FieldElem], x: &[BigRational], j: &[i64], q: u32, with_norm: bool) -> Result<CycF> {
    let r = w.len();
    let z = w.iter().zip(x).fold(FieldElem::from_integer(0), |acc, (wi, xi)| &acc + &wi.scale(xi));
    let deg = if with_norm { 2 * k } else { k };
    let mut total = CycF::zero(q);
    for m in multi_indices(r, deg + 1) {
        let mut num = FieldElem::from_integer(0);
        for l in below(&m) {
            let c = cn_coefficient(&m, &l);
            let lw = w.iter().zip(&l).fold(FieldElem::from_integer(0), |acc, (wi, &li)| &acc + &wi.scale(&BigRational::from_integer(li.into())));
            let base = &z - &lw;
            let val = if with_norm { FieldElem::rational(base.norm()).pow(k as i64) } else { base.pow(k as i64) };
            num = &num + &val.scale(&BigRational::from_integer(c.into()));
        }
        if num.is_zero() {
            continue;
        }
        let inv = inv_product(q, j, &m)?;
        total = &total + &inv.map(|c| num.scale(c));
    }
    Ok(total)
}

/// `-Σ_x Σ_λ ξ_x^λ ζ(-k, Lv, x, ξ^λ)` summed literally over an explicit set.
pub fn smoothed_literal(set: &LatticeConeSet, q: u32, k: u32, with_norm: bool) -> Result<CycF> {
    let mut total = CycF::zero(q);
    for (x, &nx) in set.shifts.iter().zip(&set.eta_residues) {
        for lam in 1..q as i64 {
            let j: Vec<i64> = set.n_lv.iter().map(|n| n * lam).collect();
            let v = lemma_cn_value(k, &set.lv, x, &j, q, with_norm)?;
            let tw = CycQ::zeta_pow(q, nx * lam).map(|c| FieldElem::rational(c.clone()));
            total = &total - &(&tw * &v);
        }
    }
    Ok(total)
}

/// `T(n, m) = Tr(ζ^n Π_i (1 - ζ^{n_i})^{-m_i})`, for `n` in `Z/q` and `m_i <= kmax + 1`.
#[derive(Clone, Debug)]
pub struct TwistTable {
    pub q: u32,
    pub kmax: u32,
    ms: Vec<Vec<u32>>,
    /// `values[m][n]`
    values: Vec<Vec<BigRational>>,
}

impl TwistTable {
    pub fn new(q: u32, n_w: &[i64], kmax: u32) -> Result<Self> {
        let ms = multi_indices(n_w.len(), kmax + 1);
        let mut values = Vec::new();
        for m in &ms {
            let g = inv_product(q, n_w, m)?;
            values.push((0..q as i64).map(|n| g.trace_shifted(n)).collect());
        }
        Ok(TwistTable { q, kmax, ms, values })
    }

    pub fn get(&self, m: &[u32], n: usize) -> &BigRational {
        let i = self.ms.iter().position(|x| x == m).expect("multi-index in range");
        &self.values[i][n]
    }

    /// `c(n) = -T(n, 1)`: the smoothed weight of one point at `k = 0`.
    pub fn weight0(&self, n: usize) -> BigRational {
        let ones = vec![1u32; self.ms[0].len()];
        -self.get(&ones, n).clone()
    }
}

/// Moment access in real units: `Σ x^α`.
pub(crate) struct MomentView<'a> {
    pub m: &'a Moments,
    pub den: &'a BigRational,
}

impl MomentView<'_> {
    pub fn count(&self) -> BigRational {
        BigRational::from_integer(self.m[0].into())
    }

    pub fn first(&self, i: usize) -> BigRational {
        BigRational::from_integer(self.m[1 + i].into()) / self.den
    }

    pub fn second(&self, i: usize, j: usize) -> BigRational {
        let idx = match (i.min(j), i.max(j)) {
            (0, 0) => 3,
            (0, 1) => 4,
            _ => 5,
        };
        BigRational::from_integer(self.m[idx].into()) / (self.den * self.den)
    }
}

/// Exact `-Σ_x Σ_λ ξ_x^λ ζ(-k, w, x, ξ^λ)` from binned moments, `k <= 2`.
pub fn twisted_from_moments(table: &TwistTable, w: &[FieldElem], den: i128, by_n: &[Moments], k: u32) -> Result<FieldElem> {
    if k > 2 || k > table.kmax {
        return Err(Error::Unsupported(format!("moment order {k} beyond the tabulated range")));
    }
    let r = w.len();
    let den = BigRational::from_integer(den.into());
    let mut total = FieldElem::from_integer(0);
    for (n, mom) in by_n.iter().enumerate() {
        if mom[0] == 0 {
            continue;
        }
        let mv = MomentView { m: mom, den: &den };
        for m in multi_indices(r, k + 1) {
            let t = table.get(&m, n);
            if t.is_zero() {
                continue;
            }
            let mut inner = FieldElem::from_integer(0);
            for l in below(&m) {
                let c = cn_coefficient(&m, &l);
                let lr: Vec<BigRational> = l.iter().map(|&x| BigRational::from_integer(x.into())).collect();
                let q = match k {
                    0 => FieldElem::rational(mv.count()),
                    1 => (0..r).fold(FieldElem::from_integer(0), |acc, i| {
                        &acc + &w[i].scale(&(mv.first(i) - &lr[i] * mv.count()))
                    }),
                    _ => {
                        let mut acc = FieldElem::from_integer(0);
                        for i in 0..r {
                            for j in 0..r {
                                let s = mv.second(i, j) - &lr[j] * mv.first(i) - &lr[i] * mv.first(j)
                                    + &lr[i] * &lr[j] * mv.count();
                                acc = &acc + &(&w[i] * &w[j]).scale(&s);
                            }
                        }
                        acc
                    }
                };
                inner = &inner + &q.scale(&BigRational::from_integer(c.into()));
            }
            total = &total - &inner.scale(t);
        }
    }
    Ok(total)
}

/// Weighted count `Σ_n count_n c(n)` (the `k = 0` case without field arithmetic).
pub fn twisted0_from_moments(table: &TwistTable, by_n: &[Moments]) -> BigRational {
    by_n.iter()
        .enumerate()
        .filter(|(_, m)| m[0] != 0)
        .fold(BigRational::zero(), |acc, (n, m)| acc + table.weight0(n) * BigRational::from_integer(m[0].into()))
}

/// The Barnes `ζ(0, w, y)` as coefficients over `[1, y1, y2, y1², y1y2, y2²]`
/// (for `r = 1`: `[1, y]`), given `ρ = w1/w2` and `1/ρ`.
pub(crate) fn barnes_coeffs<S: Scalar>(r: usize, rho: &S, rho_inv: &S) -> Vec<S> {
    let h = |n: i64, d: i64| S::from_rational(&BigRational::new(n.into(), d.into()));
    if r == 1 {
        return vec![h(1, 2), h(-1, 1)];
    }
    vec![
        h(1, 4) + h(1, 12) * rho.clone() + h(1, 12) * rho_inv.clone(),
        h(-1, 2) - h(1, 2) * rho.clone(),
        h(-1, 2) - h(1, 2) * rho_inv.clone(),
        h(1, 2) * rho.clone(),
        h(1, 1),
        h(1, 2) * rho_inv.clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadField;
    use crate::scalar::rat;

    #[test]
    fn k0_is_product_of_geometric_sums() {
        let f = QuadField::new(2).unwrap();
        let w = [f.elem(1, 0), f.elem(3, 2)];
        let x = [rat(1, 3), rat(1, 2)];
        let q = 7;
        let v = lemma_cn_value(0, &w, &x, &[2, 5], q, false).unwrap();
        let expect = &CycQ::inv_one_minus(q, 2).unwrap() * &CycQ::inv_one_minus(q, 5).unwrap();
        assert_eq!(v, expect.map(|c| FieldElem::rational(c.clone())));
        // norm and no-norm agree at k = 0
        assert_eq!(v, lemma_cn_value(0, &w, &x, &[2, 5], q, true).unwrap());
    }

    #[test]
    fn k1_rank1_matches_abel_sum() {
        // (z - v)/(1 - ξ) + v/(1 - ξ)^2 = z/(1 - ξ) + v ξ/(1 - ξ)^2
        let f = QuadField::new(3).unwrap();
        let v = f.elem(2, 1);
        let x = rat(2, 5);
        let q = 5;
        let got = lemma_cn_value(1, std::slice::from_ref(&v), std::slice::from_ref(&x), &[3], q, false).unwrap();
        let z = v.scale(&x);
        let inv = CycQ::inv_one_minus(q, 3).unwrap().map(|c| FieldElem::rational(c.clone()));
        let xi = CycQ::zeta_pow(q, 3).map(|c| FieldElem::rational(c.clone()));
        let zc = CycF::constant(q, z);
        let vc = CycF::constant(q, v);
        let expect = &(&zc * &inv) + &(&(&vc * &xi) * &(&inv * &inv));
        assert_eq!(got, expect);
    }

    #[test]
    fn finite_difference_truncation() {
        // raising the m-range beyond deg+1 adds nothing
        let f = QuadField::new(2).unwrap();
        let w = [f.elem(1, 0), f.elem(3, 2)];
        let z = f.elem(2, 1);
        for k in 0..3u32 {
            for m in multi_indices(2, 5) {
                if m.iter().all(|&mi| mi <= k + 1) {
                    continue;
                }
                let s = below(&m).iter().fold(FieldElem::from_integer(0), |acc, l| {
                    let lw = &w[0].scale(&rat(l[0] as i64, 1)) + &w[1].scale(&rat(l[1] as i64, 1));
                    &acc + &(&z - &lw).pow(k as i64).scale(&rat(cn_coefficient(&m, l), 1))
                });
                assert!(s.is_zero(), "k = {k}, m = {m:?}");
            }
        }
    }

    #[test]
    fn barnes_coefficients_reproduce_formula() {
        let rho = rat(3, 2);
        let c = barnes_coeffs(2, &rho, &(rat(1, 1) / rho.clone()));
        let (y1, y2) = (rat(1, 3), rat(3, 4));
        let mono = [rat(1, 1), y1.clone(), y2.clone(), &y1 * &y1, &y1 * &y2, &y2 * &y2];
        let val = c.iter().zip(&mono).fold(rat(0, 1), |a, (c, m)| a + c * m);
        let direct = crate::zeta::bernoulli::barnes_zeta0(&[rat(3, 1), rat(2, 1)], &[y1, y2]).unwrap();
        assert_eq!(val, direct);
    }
}
