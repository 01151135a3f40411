//! Ruled cubic surfaces of `PG(4,q)`: a line directrix, a conic directrix
//! and a projectivity `ω` between their parameters.

use serde::Serialize;

use super::baer::{BaerSubline, BaerSubplane, BaerType};
use super::curve::{subsets, RationalCurve};
use super::quadric::QuadricForm;
use crate::bruckbose::BruckBoseFrame;
use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix, Vector};
use crate::projective::{enumerate_hyperplanes, Point, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuledCubicSurface {
    /// `5×2`; the directrix point for `(s,t)` is `D·(s,t)`.
    directrix: Matrix,
    conic: RationalCurve,
    /// `2×2`; conic parameter `θ` is joined to `D·ω·(1,θ)`.
    omega: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SectionType {
    Directrix,
    DirectrixAndOneGenerator,
    DirectrixAndTwoGenerators,
    ConicAndGenerator,
    TwistedCubic,
}

impl SectionType {
    pub const ALL: [SectionType; 5] = [
        SectionType::Directrix,
        SectionType::DirectrixAndOneGenerator,
        SectionType::DirectrixAndTwoGenerators,
        SectionType::ConicAndGenerator,
        SectionType::TwistedCubic,
    ];

    /// The number of hyperplanes of each type.
    pub fn expected_count(self, q: u64) -> u64 {
        match self {
            SectionType::Directrix => (q * q - q) / 2,
            SectionType::DirectrixAndOneGenerator => q + 1,
            SectionType::DirectrixAndTwoGenerators => (q * q + q) / 2,
            SectionType::ConicAndGenerator => q * q * q + q * q,
            SectionType::TwistedCubic => q * q * q * q - q * q,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    /// Indexed like [`SectionType::ALL`].
    pub counts: [u64; 5],
    /// Twisted-cubic sections meeting some generator other than once.
    pub generator_violations: u64,
}

fn line_param(theta: Option<FElem>) -> Vector {
    match theta {
        Some(t) => vec![FElem::ONE, t],
        None => vec![FElem::ZERO, FElem::ONE],
    }
}

impl RuledCubicSurface {
    pub fn new(f: &FieldTower, directrix: Matrix, conic: RationalCurve, omega: Matrix) -> Result<RuledCubicSurface> {
        if conic.degree() != 2 || directrix.len() != 5 || directrix[0].len() != 2 {
            return Err(Error::DimensionMismatch("ruled surface needs a line and a conic of PG(4,·)".into()));
        }
        if linalg::inverse(f, &omega).is_none() {
            return Err(Error::Degenerate("singular ω".into()));
        }
        let d = Subspace::from_vectors(f, 4, &linalg::transpose(&directrix));
        if d.rank() != 2 || !d.meet(f, &conic.span(f)).is_empty() {
            return Err(Error::Degenerate("directrices must be a line and a disjoint plane".into()));
        }
        Ok(RuledCubicSurface { directrix, conic, omega })
    }

    /// `{(s, sθ, t, tθ, tθ²)}`.
    pub fn standard(f: &FieldTower) -> RuledCubicSurface {
        let e = |i: usize| -> Vector { (0..5).map(|k| if k == i { FElem::ONE } else { FElem::ZERO }).collect() };
        let directrix = linalg::from_columns(&[e(0), e(1)]);
        let conic = RationalCurve::new(f, linalg::from_columns(&[e(2), e(3), e(4)])).unwrap();
        RuledCubicSurface::new(f, directrix, conic, linalg::identity(2)).unwrap()
    }

    /// The image under a collineation `x ↦ M·x`.
    pub fn transformed(&self, f: &FieldTower, m: &Matrix) -> Result<RuledCubicSurface> {
        let conic = RationalCurve::new(f, linalg::mat_mul(f, m, self.conic.matrix()))?;
        RuledCubicSurface::new(f, linalg::mat_mul(f, m, &self.directrix), conic, self.omega.clone())
    }

    pub fn directrix(&self, f: &FieldTower) -> Subspace {
        Subspace::from_vectors(f, 4, &linalg::transpose(&self.directrix))
    }

    pub fn conic(&self) -> &RationalCurve {
        &self.conic
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn directrix_point(&self, f: &FieldTower, theta: Option<FElem>) -> Point {
        let st = linalg::mat_vec(f, &self.omega, &line_param(theta));
        Point::new(f, linalg::mat_vec(f, &self.directrix, &st)).unwrap()
    }

    pub fn generator(&self, f: &FieldTower, theta: Option<FElem>) -> Subspace {
        Subspace::join_points(f, &self.conic.point(f, theta), &self.directrix_point(f, theta))
    }

    /// Generators for `θ ∈ F_q ∪ {∞}`.
    pub fn generators(&self, f: &FieldTower) -> Vec<Subspace> {
        f.elements(Level::Base).map(Some).chain([None]).map(|t| self.generator(f, t)).collect()
    }

    /// Points of the surface extended through its parametrisation.
    pub fn points(&self, f: &FieldTower, level: Level) -> Vec<Point> {
        let mut pts = self.directrix(f).points(f, level);
        for theta in f.elements(level).map(Some).chain([None]) {
            pts.extend(self.generator(f, theta).points(f, level));
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// The collineation taking the standard surface to this one.
    pub fn frame_matrix(&self, f: &FieldTower) -> Matrix {
        let dw = linalg::mat_mul(f, &self.directrix, &self.omega);
        let mut cols = linalg::transpose(&dw);
        cols.extend(linalg::transpose(self.conic.matrix()));
        linalg::from_columns(&cols)
    }

    /// The three quadrics cutting out the surface: the 2×2 minors of
    /// `[[x0, x2, x3], [x1, x3, x4]]` pulled back through the frame.
    pub fn quadrics(&self, f: &FieldTower) -> Vec<QuadricForm> {
        let inv = linalg::inverse(f, &self.frame_matrix(f)).expect("surface frame is invertible");
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            let p = QuadricForm::product(f, &inv[a], &inv[b]);
            let r = QuadricForm::product(f, &inv[c], &inv[d]);
            let mut coeffs = p;
            for (x, y) in coeffs.iter_mut().zip(r) {
                *x = f.sub(*x, y);
            }
            QuadricForm::new(coeffs).expect("minor is nonzero")
        };
        vec![minor(0, 3, 1, 2), minor(0, 4, 1, 3), minor(2, 4, 3, 3)]
    }

    /// Whether `p` lies on every quadric through the surface.
    pub fn equations_contain(f: &FieldTower, quadrics: &[QuadricForm], p: &Point) -> bool {
        quadrics.iter().all(|qf| qf.eval(f, p.coords()).is_zero())
    }

    /// The surface `[B]` for a Baer subplane tangent to `ℓ∞`.
    pub fn from_tangent_subplane(frame: &BruckBoseFrame, b: &BaerSubplane) -> Result<RuledCubicSurface> {
        let f = frame.tower();
        if b.infinity_type() != BaerType::Tangent {
            return Err(Error::InvalidInput("Baer subplane is not tangent to ℓ∞".into()));
        }
        let t_bar = b.tangent_point().unwrap();
        let t_delta = frame.ell_inf_parameter(t_bar).unwrap();
        let directrix = linalg::transpose(frame.spread_line(t_delta).basis());
        let lines = b.lines(f);
        let (_, n_pts) = lines
            .iter()
            .find(|(_, m)| !m.contains(t_bar))
            .ok_or_else(|| Error::Degenerate("no line of B avoids the tangent point".into()))?;
        let n = BaerSubline::through(f, &n_pts[0], &n_pts[1], &n_pts[2])?;
        let conic = RationalCurve::bb_image_of_subline(f, &n)?;
        if conic.degree() != 2 {
            return Err(Error::Degenerate("line of B does not map to a conic".into()));
        }
        let t_line = frame.spread_line(t_delta).clone();
        // the generator through the conic point at θ meets [T] in X(θ)
        let foot = |theta: Option<FElem>| -> Result<Vector> {
            let plane_pt = subline_point(f, &n, theta);
            let (_, members) = lines
                .iter()
                .find(|(_, m)| m.contains(t_bar) && m.contains(&plane_pt))
                .expect("a line of B joins T̄ to each point");
            let affine: Vec<Point> =
                members.iter().filter(|p| *p != t_bar).take(2).map(|p| frame.bb_map(p).unwrap()).collect();
            let gen = Subspace::join_points(f, &affine[0], &affine[1]);
            let x = gen.meet(f, &t_line).as_point().ok_or_else(|| Error::Degenerate("generator misses [T]".into()))?;
            linalg::coordinates(f, &linalg::transpose(&directrix), x.coords())
                .ok_or_else(|| Error::Degenerate("foot not on [T]".into()))
        };
        let x0 = foot(Some(FElem::ZERO))?;
        let xinf = foot(None)?;
        let x1 = foot(Some(FElem::ONE))?;
        let lam = linalg::coordinates(f, &[x0.clone(), xinf.clone()], &x1)
            .ok_or_else(|| Error::Degenerate("feet are dependent".into()))?;
        let omega = linalg::from_columns(&[linalg::scale(f, &x0, lam[0]), linalg::scale(f, &xinf, lam[1])]);
        let surface = RuledCubicSurface::new(f, directrix, conic, omega)?;
        let mut expect: Vec<Point> = b.affine_points().iter().map(|p| frame.bb_map(p).unwrap()).collect();
        expect.extend(t_line.points(f, Level::Base));
        expect.sort();
        if surface.points(f, Level::Base) != expect {
            return Err(Error::Degenerate("recovered surface differs from the image of B".into()));
        }
        Ok(surface)
    }

    /// Classifies the section by a hyperplane `form`.
    pub fn section_type(&self, f: &FieldTower, form: &[FElem], points: &[Point], gens: &[Vec<Point>]) -> Result<SectionType> {
        let on = |p: &Point| linalg::dot(f, form, p.coords()).is_zero();
        let q = f.q() as usize;
        let section: Vec<&Point> = points.iter().filter(|p| on(p)).collect();
        let dir = self.directrix(f);
        let dir_in = dir.points(f, Level::Base).iter().all(&on);
        let contained: Vec<&Vec<Point>> = gens.iter().filter(|g| g.iter().all(&on)).collect();
        let bad = || Error::Degenerate(format!("hyperplane section of {} points fits no type", section.len()));
        if dir_in {
            let expect = (q + 1) + contained.len() * q;
            return match contained.len() {
                0 if section.len() == expect => Ok(SectionType::Directrix),
                1 if section.len() == expect => Ok(SectionType::DirectrixAndOneGenerator),
                2 if section.len() == expect => Ok(SectionType::DirectrixAndTwoGenerators),
                _ => Err(bad()),
            };
        }
        match contained.len() {
            1 => {
                let gen = contained[0];
                let off: Vec<&Point> = section.iter().copied().filter(|p| !gen.contains(p)).collect();
                if section.len() != 2 * q + 1 {
                    return Err(bad());
                }
                // for q = 2 the two points off the generator do not fix the conic plane
                if q > 2 {
                    let plane = Subspace::span_points(f, &off.iter().map(|p| (*p).clone()).collect::<Vec<_>>())?;
                    let meet: Vec<&Point> = gen.iter().filter(|p| plane.contains_point(f, p)).collect();
                    if plane.proj_dim() > 2 || meet.len() != 1 {
                        return Err(bad());
                    }
                    let mut conic: Vec<&Point> = off;
                    conic.push(meet[0]);
                    if has_collinear_triple(f, &conic) {
                        return Err(bad());
                    }
                }
                Ok(SectionType::ConicAndGenerator)
            }
            0 => {
                if section.len() != q + 1 || section.iter().filter(|p| dir.contains_point(f, p)).count() != 1 {
                    return Err(bad());
                }
                let coords: Vec<Vector> = section.iter().map(|p| p.coords().to_vec()).collect();
                if linalg::rank(f, &coords) != coords.len().min(4) {
                    return Err(bad());
                }
                if coords.len() >= 4 {
                    for s in subsets(coords.len(), 4) {
                        let rows: Vec<Vector> = s.iter().map(|&i| coords[i].clone()).collect();
                        if linalg::rank(f, &rows) != 4 {
                            return Err(bad());
                        }
                    }
                }
                Ok(SectionType::TwistedCubic)
            }
            _ => Err(bad()),
        }
    }

    /// Counts of every hyperplane of `PG(4,q)` by section type.
    pub fn hyperplane_census(&self, f: &FieldTower) -> Result<Census> {
        let points = self.points(f, Level::Base);
        let gens: Vec<Vec<Point>> = self.generators(f).iter().map(|g| g.points(f, Level::Base)).collect();
        let mut counts = [0u64; 5];
        let mut generator_violations = 0;
        for h in enumerate_hyperplanes(f, 4, Level::Base)? {
            let form = h.equations(f).remove(0);
            let ty = self.section_type(f, &form, &points, &gens)?;
            counts[SectionType::ALL.iter().position(|&t| t == ty).unwrap()] += 1;
            if ty == SectionType::TwistedCubic {
                let once = gens
                    .iter()
                    .all(|g| g.iter().filter(|p| linalg::dot(f, &form, p.coords()).is_zero()).count() == 1);
                if !once {
                    generator_violations += 1;
                }
            }
        }
        Ok(Census { counts, generator_violations })
    }
}

fn subline_point(f: &FieldTower, b: &BaerSubline, theta: Option<FElem>) -> Point {
    Point::new(f, linalg::mat_vec(f, b.matrix(), &line_param(theta))).unwrap()
}

fn has_collinear_triple(f: &FieldTower, pts: &[&Point]) -> bool {
    subsets(pts.len(), 3).iter().any(|s| {
        let rows: Vec<Vector> = s.iter().map(|&i| pts[i].coords().to_vec()).collect();
        linalg::rank(f, &rows) < 3
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_surface_basics() {
        for q in [2, 3, 4] {
            let f = FieldTower::new(q).unwrap();
            let v = RuledCubicSurface::standard(&f);
            let q = q as usize;
            assert_eq!(v.points(&f, Level::Base).len(), q * q + 2 * q + 1);
            let quadrics = v.quadrics(&f);
            let mut on: Vec<Point> = crate::projective::enumerate_points(&f, 4, Level::Base)
                .unwrap()
                .filter(|p| RuledCubicSurface::equations_contain(&f, &quadrics, p))
                .collect();
            on.sort();
            assert_eq!(on, v.points(&f, Level::Base));
        }
    }

    #[test]
    fn census_at_three() {
        let f = FieldTower::new(3).unwrap();
        let c = RuledCubicSurface::standard(&f).hyperplane_census(&f).unwrap();
        assert_eq!(c.counts, [3, 4, 6, 36, 72]);
        assert_eq!(c.generator_violations, 0);
    }

    #[test]
    fn tangent_subplane_image() {
        for q in [3, 4] {
            let f = FieldTower::new(q).unwrap();
            let frame = BruckBoseFrame::new(f.clone());
            let (o, i, z) = (FElem::ONE, FElem::ZERO, f.tau());
            let h = vec![vec![o, i, f.tau()], vec![i, o, o], vec![i, o, z]];
            let b = BaerSubplane::from_frame(&f, h).unwrap();
            assert_eq!(b.infinity_type(), BaerType::Tangent);
            let v = RuledCubicSurface::from_tangent_subplane(&frame, &b).unwrap();
            let q = q as usize;
            assert_eq!(v.points(&f, Level::Base).len(), q * q + 2 * q + 1);
            let quadrics = v.quadrics(&f);
            for p in frame.g().points(&f, Level::Quadratic).iter().chain(&frame.gq().points(&f, Level::Quadratic)) {
                assert!(RuledCubicSurface::equations_contain(&f, &quadrics, p));
            }
            let census = v.hyperplane_census(&f).unwrap();
            let expect: Vec<u64> = SectionType::ALL.iter().map(|t| t.expected_count(q as u64)).collect();
            assert_eq!(census.counts.to_vec(), expect);
        }
    }
}
