//! Conics of `PG(2,q²)`: `a x² + b y² + c z² + d xy + e xz + f yz`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix, Vector};
use crate::projective::{Point, Subspace};

/// How a conic meets `ℓ∞` over `F_{q²}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InfinityType {
    Secant,
    Tangent,
    Exterior,
}

pub(crate) fn conic_monomials(f: &FieldTower, p: &[FElem]) -> Vector {
    let [x, y, z] = [p[0], p[1], p[2]];
    vec![f.mul(x, x), f.mul(y, y), f.mul(z, z), f.mul(x, y), f.mul(x, z), f.mul(y, z)]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConicPG2 {
    /// Normalised so the first nonzero coefficient is 1.
    coeffs: [FElem; 6],
}

impl ConicPG2 {
    /// A nondegenerate conic; errors when the discriminant vanishes.
    pub fn new(f: &FieldTower, coeffs: [FElem; 6]) -> Result<ConicPG2> {
        let c = ConicPG2::normalized(f, coeffs)?;
        if c.discriminant(f).is_zero() {
            return Err(Error::Degenerate("singular conic".into()));
        }
        Ok(c)
    }

    fn normalized(f: &FieldTower, coeffs: [FElem; 6]) -> Result<ConicPG2> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Degenerate("zero conic".into()))?;
        let inv = f.inv(*lead).unwrap();
        Ok(ConicPG2 { coeffs: coeffs.map(|c| f.mul(c, inv)) })
    }

    pub fn coeffs(&self) -> &[FElem; 6] {
        &self.coeffs
    }

    /// `4abc + def − af² − be² − cd²`; zero exactly for singular conics, in
    /// every characteristic.
    pub fn discriminant(&self, f: &FieldTower) -> FElem {
        let [a, b, c, d, e, g] = self.coeffs;
        let m = |x: FElem, y: FElem| f.mul(x, y);
        let four = f.from_int(4);
        let pos = f.add(m(four, m(a, m(b, c))), m(d, m(e, g)));
        let neg = f.add(f.add(m(a, m(g, g)), m(b, m(e, e))), m(c, m(d, d)));
        f.sub(pos, neg)
    }

    pub fn is_defined_over(&self, f: &FieldTower, level: Level) -> bool {
        self.coeffs.iter().all(|&c| f.in_level(c, level))
    }

    pub fn eval(&self, f: &FieldTower, p: &[FElem]) -> FElem {
        linalg::dot(f, &self.coeffs, &conic_monomials(f, p))
    }

    pub fn contains(&self, f: &FieldTower, p: &Point) -> bool {
        self.eval(f, p.coords()).is_zero()
    }

    /// Line coordinates of the tangent at a point of the conic.
    pub fn tangent(&self, f: &FieldTower, p: &Point) -> Vector {
        let [a, b, c, d, e, g] = self.coeffs;
        let [x, y, z] = [p.coords()[0], p.coords()[1], p.coords()[2]];
        let two = f.from_int(2);
        let m = |u: FElem, v: FElem| f.mul(u, v);
        vec![
            f.add(f.add(m(m(two, a), x), m(d, y)), m(e, z)),
            f.add(f.add(m(d, x), m(m(two, b), y)), m(g, z)),
            f.add(f.add(m(e, x), m(g, y)), m(m(two, c), z)),
        ]
    }

    pub fn tangent_line(&self, f: &FieldTower, p: &Point) -> Subspace {
        Subspace::from_equations(f, 2, &[self.tangent(f, p)])
    }

    /// All points over `level`, sorted.
    pub fn points(&self, f: &FieldTower, level: Level) -> Vec<Point> {
        let [a, b, c, d, e, g] = self.coeffs;
        let m = |u: FElem, v: FElem| f.mul(u, v);
        let mut out = Vec::new();
        for x in f.elements(level) {
            // b y² + (d x + f) y + (a x² + e x + c) = 0 with z = 1
            let lin = f.add(m(d, x), g);
            let cst = f.add(f.add(m(a, m(x, x)), m(e, x)), c);
            if let Some(roots) = f.binary_quadratic_roots(b, lin, cst, level) {
                out.extend(roots.into_iter().flatten().map(|y| Point::new(f, vec![x, y, FElem::ONE]).unwrap()));
            }
        }
        for delta in self.ell_inf_roots(f, level) {
            out.push(match delta {
                Some(x) => Point::new(f, vec![x, FElem::ONE, FElem::ZERO]).unwrap(),
                None => Point::new(f, vec![FElem::ONE, FElem::ZERO, FElem::ZERO]).unwrap(),
            });
        }
        out.sort();
        out.dedup();
        out
    }

    /// Parameters `δ` (with `(δ,1,0)`, `None` for `(1,0,0)`) of the meet with
    /// `ℓ∞`, with multiplicity.
    pub fn ell_inf_roots(&self, f: &FieldTower, level: Level) -> Vec<Option<FElem>> {
        let [a, b, _, d, _, _] = self.coeffs;
        f.binary_quadratic_roots(a, d, b, level).expect("a nondegenerate conic does not contain ℓ∞")
    }

    pub fn ell_inf_points(&self, f: &FieldTower, level: Level) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .ell_inf_roots(f, level)
            .into_iter()
            .map(|d| match d {
                Some(x) => Point::new(f, vec![x, FElem::ONE, FElem::ZERO]).unwrap(),
                None => Point::new(f, vec![FElem::ONE, FElem::ZERO, FElem::ZERO]).unwrap(),
            })
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn infinity_type(&self, f: &FieldTower) -> InfinityType {
        let roots = self.ell_inf_roots(f, Level::Quadratic);
        match roots.len() {
            0 => InfinityType::Exterior,
            _ if roots[0] == roots[1] => InfinityType::Tangent,
            _ => InfinityType::Secant,
        }
    }

    /// The conic through five points, which must be in general position.
    /// Works over any level; the result may have coefficients outside
    /// `F_{q²}`.
    pub fn through_five(f: &FieldTower, pts: &[Point]) -> Result<ConicPG2> {
        if pts.len() != 5 {
            return Err(Error::InvalidInput(format!("need five points, got {}", pts.len())));
        }
        for i in 0..5 {
            for j in i + 1..5 {
                for k in j + 1..5 {
                    if linalg::det3(f, pts[i].coords(), pts[j].coords(), pts[k].coords()).is_zero() {
                        return Err(Error::Degenerate("three of the five points are collinear".into()));
                    }
                }
            }
        }
        ConicPG2::from_conditions(f, pts.iter().map(|p| conic_monomials(f, p.coords())).collect())
    }

    /// The unique conic through `pts` (at least five points); errors when
    /// the points leave more than one conic or none.
    pub fn through_points(f: &FieldTower, pts: &[Point]) -> Result<ConicPG2> {
        if pts.len() < 5 {
            return Err(Error::InvalidInput(format!("need at least five points, got {}", pts.len())));
        }
        ConicPG2::from_conditions(f, pts.iter().map(|p| conic_monomials(f, p.coords())).collect())
    }

    /// The conic through `a, b, c` tangent to `ℓ∞` at `t`.
    pub fn through_three_tangent_at(f: &FieldTower, a: &Point, b: &Point, c: &Point, t: &Point) -> Result<ConicPG2> {
        let tc = t.coords();
        if !tc[2].is_zero() {
            return Err(Error::InvalidInput("tangency point is not on ℓ∞".into()));
        }
        // f(t) = 0, ∂x f(t) = 0, ∂y f(t) = 0 with z(t) = 0
        let two = f.from_int(2);
        let (x, y) = (tc[0], tc[1]);
        let z = FElem::ZERO;
        let mut rows = vec![conic_monomials(f, tc)];
        rows.push(vec![f.mul(two, x), z, z, y, z, z]);
        rows.push(vec![z, f.mul(two, y), z, x, z, z]);
        for p in [a, b, c] {
            rows.push(conic_monomials(f, p.coords()));
        }
        let conic = ConicPG2::from_conditions(f, rows)?;
        let roots = conic.ell_inf_roots(f, Level::Quartic);
        if roots.len() != 2 || roots[0] != roots[1] || !conic.contains(f, t) {
            return Err(Error::Degenerate("conic is not tangent at the given point".into()));
        }
        Ok(conic)
    }

    fn from_conditions(f: &FieldTower, rows: Matrix) -> Result<ConicPG2> {
        let ns = linalg::nullspace(f, &rows, 6);
        if ns.len() != 1 {
            return Err(Error::Degenerate(format!("{}-dimensional family of conics", ns.len())));
        }
        ConicPG2::new(f, ns[0].clone().try_into().unwrap())
    }

    /// A matrix `H` with `θ ↦ H·(1, θ, θ²)` parametrising the conic, sending
    /// `0, ∞, 1` to `a, b, c`.
    pub fn parametrization(&self, f: &FieldTower, a: &Point, b: &Point, c: &Point) -> Result<Matrix> {
        for p in [a, b, c] {
            if !self.contains(f, p) {
                return Err(Error::InvalidInput(format!("{p:?} is not on the conic")));
            }
        }
        if a == b || a == c || b == c {
            return Err(Error::InvalidInput("parametrisation needs three distinct points".into()));
        }
        let k = linalg::cross(f, &self.tangent(f, a), &self.tangent(f, b));
        let basis = vec![a.coords().to_vec(), k, b.coords().to_vec()];
        let coef = linalg::coordinates(f, &basis, c.coords())
            .ok_or_else(|| Error::Degenerate("tangent meet lies on the chord".into()))?;
        let cols: Matrix = basis.iter().zip(&coef).map(|(v, &s)| linalg::scale(f, v, s)).collect();
        Ok(linalg::from_columns(&cols))
    }
}

/// `H·(1, θ, θ²)`, `θ = None` giving the last column.
pub fn conic_param_point(f: &FieldTower, h: &Matrix, theta: Option<FElem>) -> Point {
    let v = match theta {
        None => vec![FElem::ZERO, FElem::ZERO, FElem::ONE],
        Some(t) => vec![FElem::ONE, t, f.mul(t, t)],
    };
    Point::new(f, linalg::mat_vec(f, h, &v)).expect("parametrisation matrix is invertible")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(f: &FieldTower, c: [FElem; 3]) -> Point {
        Point::new(f, c.to_vec()).unwrap()
    }

    fn standard(f: &FieldTower) -> ConicPG2 {
        // y² = xz
        let z = FElem::ZERO;
        ConicPG2::new(f, [z, FElem::ONE, z, z, f.neg(FElem::ONE), z]).unwrap()
    }

    #[test]
    fn nondegenerate_conics_have_q_plus_one_points() {
        for q in [2, 3, 4, 5] {
            let f = FieldTower::new(q).unwrap();
            let c = standard(&f);
            assert_eq!(c.points(&f, Level::Quadratic).len(), (q * q + 1) as usize);
            assert_eq!(c.points(&f, Level::Base).len(), (q + 1) as usize);
            assert_eq!(c.infinity_type(&f), InfinityType::Tangent);
            let z = FElem::ZERO;
            let pair = ConicPG2::new(&f, [FElem::ONE, z, z, FElem::ONE, z, z]);
            assert!(pair.is_err());
        }
    }

    #[test]
    fn through_five_recovers_conic() {
        let f = FieldTower::new(5).unwrap();
        let c = standard(&f);
        let pts = c.points(&f, Level::Quadratic);
        let five: Vec<Point> = pts.iter().step_by(4).take(5).cloned().collect();
        assert_eq!(ConicPG2::through_five(&f, &five).unwrap(), c);
    }

    #[test]
    fn parametrization_covers_the_conic() {
        for q in [3, 4] {
            let f = FieldTower::new(q).unwrap();
            let c = standard(&f);
            let one = FElem::ONE;
            let z = FElem::ZERO;
            let a = pt(&f, [one, z, z]);
            let b = pt(&f, [z, z, one]);
            let cc = pt(&f, [f.tau(), f.tau(), f.tau()]);
            let h = c.parametrization(&f, &a, &b, &cc).unwrap();
            assert_eq!(conic_param_point(&f, &h, Some(z)), a);
            assert_eq!(conic_param_point(&f, &h, None), b);
            assert_eq!(conic_param_point(&f, &h, Some(one)), cc);
            let mut image: Vec<Point> = f
                .elements(Level::Quadratic)
                .map(Some)
                .chain([None])
                .map(|t| conic_param_point(&f, &h, t))
                .collect();
            image.sort();
            assert_eq!(image, c.points(&f, Level::Quadratic));
        }
    }

    #[test]
    fn tangent_condition_fit() {
        let f = FieldTower::new(4).unwrap();
        let c = standard(&f);
        let pts = c.points(&f, Level::Quadratic);
        let t = pt(&f, [FElem::ONE, FElem::ZERO, FElem::ZERO]);
        let affine: Vec<&Point> = pts.iter().filter(|p| !p.coords()[2].is_zero()).collect();
        let fit = ConicPG2::through_three_tangent_at(&f, affine[1], affine[4], affine[9], &t).unwrap();
        assert_eq!(fit, c);
    }
}
