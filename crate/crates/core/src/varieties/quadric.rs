//! Quadratic forms in `(x0,x1,y0,y1,z)` stored as upper-triangular
//! coefficient arrays, so characteristic 2 needs no special casing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix};

pub const VARS: usize = 5;
pub const MONOMIALS: usize = 15;

/// Position of `x_i·x_j` (`i ≤ j`) in the coefficient array.
pub fn monomial_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * VARS - i * (i + 1) / 2 + j
}

/// All fifteen monomials evaluated at `v`.
pub fn monomials(f: &FieldTower, v: &[FElem]) -> [FElem; MONOMIALS] {
    let mut out = [FElem::ZERO; MONOMIALS];
    for i in 0..VARS {
        for j in i..VARS {
            out[monomial_index(i, j)] = f.mul(v[i], v[j]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadricForm {
    coeffs: [FElem; MONOMIALS],
}

impl QuadricForm {
    pub fn new(coeffs: [FElem; MONOMIALS]) -> Result<QuadricForm> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate("zero quadratic form".into()));
        }
        Ok(QuadricForm { coeffs })
    }

    /// Builds a form from `(i, j, c)` triples; repeated monomials add up.
    pub fn from_terms(f: &FieldTower, terms: &[(usize, usize, FElem)]) -> Result<QuadricForm> {
        let mut coeffs = [FElem::ZERO; MONOMIALS];
        for &(i, j, c) in terms {
            let k = monomial_index(i, j);
            coeffs[k] = f.add(coeffs[k], c);
        }
        QuadricForm::new(coeffs)
    }

    /// The product of two linear forms.
    pub fn product(f: &FieldTower, a: &[FElem], b: &[FElem]) -> [FElem; MONOMIALS] {
        let mut coeffs = [FElem::ZERO; MONOMIALS];
        for i in 0..VARS {
            for j in 0..VARS {
                let k = monomial_index(i, j);
                coeffs[k] = f.add(coeffs[k], f.mul(a[i], b[j]));
            }
        }
        coeffs
    }

    pub fn coeffs(&self) -> &[FElem; MONOMIALS] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> FElem {
        self.coeffs[monomial_index(i, j)]
    }

    pub fn is_defined_over(&self, f: &FieldTower, level: Level) -> bool {
        self.coeffs.iter().all(|&c| f.in_level(c, level))
    }

    pub fn eval(&self, f: &FieldTower, v: &[FElem]) -> FElem {
        let m = monomials(f, v);
        linalg::dot(f, &self.coeffs, &m)
    }

    /// The polar form `B(u,v) = Q(u+v) − Q(u) − Q(v)`.
    pub fn polar(&self, f: &FieldTower, u: &[FElem], v: &[FElem]) -> FElem {
        let mut acc = FElem::ZERO;
        for i in 0..VARS {
            for j in i..VARS {
                let c = self.coeffs[monomial_index(i, j)];
                if c.is_zero() {
                    continue;
                }
                let t = if i == j {
                    f.add(f.mul(u[i], v[i]), f.mul(u[i], v[i]))
                } else {
                    f.add(f.mul(u[i], v[j]), f.mul(u[j], v[i]))
                };
                acc = f.add(acc, f.mul(c, t));
            }
        }
        acc
    }

    /// `(Q(p), B(p,r), Q(r))`: the restriction `Q(s·p + t·r)` as a binary
    /// quadratic in `(s, t)`.
    pub fn restrict_to_line(&self, f: &FieldTower, p: &[FElem], r: &[FElem]) -> (FElem, FElem, FElem) {
        (self.eval(f, p), self.polar(f, p, r), self.eval(f, r))
    }

    pub fn scale(&self, f: &FieldTower, c: FElem) -> QuadricForm {
        QuadricForm { coeffs: self.coeffs.map(|x| f.mul(x, c)) }
    }

    /// `self + other`; may be the zero form, hence no `Result`.
    pub fn add_unchecked(&self, f: &FieldTower, other: &QuadricForm) -> [FElem; MONOMIALS] {
        let mut out = self.coeffs;
        for (x, &y) in out.iter_mut().zip(&other.coeffs) {
            *x = f.add(*x, y);
        }
        out
    }

    /// Forms vanishing on every given point: a basis of the solution space.
    pub fn through_points(f: &FieldTower, points: &[Vec<FElem>]) -> Vec<QuadricForm> {
        let rows: Matrix = points.iter().map(|p| monomials(f, p).to_vec()).collect();
        linalg::nullspace(f, &rows, MONOMIALS)
            .into_iter()
            .map(|v| QuadricForm { coeffs: v.try_into().unwrap() })
            .collect()
    }
}

/// The pencil `Q_t = t·Q∞ + Q0`, `t ∈ F_q ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricPencil {
    pub qinf: QuadricForm,
    pub q0: QuadricForm,
}

impl QuadricPencil {
    /// `Q_t`; `t = None` gives `Q∞`. `None` when the member is the zero form.
    pub fn member(&self, f: &FieldTower, t: Option<FElem>) -> Option<QuadricForm> {
        match t {
            None => Some(self.qinf.clone()),
            Some(t) => QuadricForm::new(self.qinf.scale(f, t).add_unchecked(f, &self.q0)).ok(),
        }
    }

    /// Whether `v` lies on both generators (the base locus).
    pub fn base_locus_contains(&self, f: &FieldTower, v: &[FElem]) -> bool {
        self.qinf.eval(f, v).is_zero() && self.q0.eval(f, v).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_indices_are_a_bijection() {
        let mut seen = [false; MONOMIALS];
        for i in 0..VARS {
            for j in i..VARS {
                let k = monomial_index(i, j);
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(monomial_index(j, i), k);
            }
        }
    }

    #[test]
    fn polar_matches_definition() {
        for q in [2, 3, 4] {
            let f = FieldTower::new(q).unwrap();
            let els: Vec<_> = f.elements(Level::Quadratic).collect();
            let mut coeffs = [FElem::ZERO; MONOMIALS];
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c = els[(k * 7 + 3) % els.len()];
            }
            let form = QuadricForm::new(coeffs).unwrap();
            let u: Vec<_> = (0..5).map(|k| els[(k * 5 + 1) % els.len()]).collect();
            let v: Vec<_> = (0..5).map(|k| els[(k * 3 + 2) % els.len()]).collect();
            let sum = linalg::add(&f, &u, &v);
            let expect = f.sub(f.sub(form.eval(&f, &sum), form.eval(&f, &u)), form.eval(&f, &v));
            assert_eq!(form.polar(&f, &u, &v), expect);
        }
    }

    #[test]
    fn forms_through_points_vanish_there() {
        let f = FieldTower::new(3).unwrap();
        let pts: Vec<Vec<FElem>> = (0..9i64)
            .map(|k| (0..5).map(|i| f.from_int((k * (i + 1) + i * i) % 3)).collect())
            .filter(|v: &Vec<FElem>| v.iter().any(|c| !c.is_zero()))
            .collect();
        for form in QuadricForm::through_points(&f, &pts) {
            assert!(pts.iter().all(|p| form.eval(&f, p).is_zero()));
        }
    }
}
