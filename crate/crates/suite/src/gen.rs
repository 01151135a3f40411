//! Random instances for sampled checkers.

use bbgeom::linalg::{self, Matrix, Vector};
use bbgeom::varieties::{standard_conic_image, BaerSubline, BaerSubplane, ConicPG2, FqConic, InfinityType};
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Level, Point};
use rand::Rng;

pub fn elem<R: Rng>(f: &FieldTower, rng: &mut R, level: Level) -> FElem {
    f.element_at(level, rng.gen_range(0..f.order(level)))
}

pub fn nonzero<R: Rng>(f: &FieldTower, rng: &mut R, level: Level) -> FElem {
    loop {
        let x = elem(f, rng, level);
        if !x.is_zero() {
            return x;
        }
    }
}

/// An element of `level` outside the subfield `below`.
pub fn outside<R: Rng>(f: &FieldTower, rng: &mut R, level: Level, below: Level) -> FElem {
    loop {
        let x = elem(f, rng, level);
        if !f.in_level(x, below) {
            return x;
        }
    }
}

pub fn vector<R: Rng>(f: &FieldTower, rng: &mut R, len: usize, level: Level) -> Vector {
    (0..len).map(|_| elem(f, rng, level)).collect()
}

pub fn point<R: Rng>(f: &FieldTower, rng: &mut R, len: usize, level: Level) -> Point {
    loop {
        if let Ok(p) = Point::new(f, vector(f, rng, len, level)) {
            return p;
        }
    }
}

pub fn invertible<R: Rng>(f: &FieldTower, rng: &mut R, n: usize, level: Level) -> Matrix {
    loop {
        let m: Matrix = (0..n).map(|_| vector(f, rng, n, level)).collect();
        if linalg::inverse(f, &m).is_some() {
            return m;
        }
    }
}

/// A collineation of `PG(2,q²)` fixing `ℓ∞` (an affine map).
pub fn affine_map<R: Rng>(f: &FieldTower, rng: &mut R) -> Matrix {
    loop {
        let mut m: Matrix = (0..2).map(|_| vector(f, rng, 3, Level::Quadratic)).collect();
        m.push(vec![FElem::ZERO, FElem::ZERO, FElem::ONE]);
        if linalg::inverse(f, &m).is_some() {
            return m;
        }
    }
}

pub fn tangent_subplane<R: Rng>(f: &FieldTower, rng: &mut R) -> BaerSubplane {
    let (o, z, t) = (FElem::ONE, FElem::ZERO, f.tau());
    let h = vec![vec![o, z, t], vec![z, o, o], vec![z, o, t]];
    BaerSubplane::from_frame(f, linalg::mat_mul(f, &affine_map(f, rng), &h)).unwrap()
}

pub fn secant_subplane<R: Rng>(f: &FieldTower, rng: &mut R) -> BaerSubplane {
    BaerSubplane::from_frame(f, affine_map(f, rng)).unwrap()
}

pub fn ell_inf_point<R: Rng>(frame: &BruckBoseFrame, rng: &mut R) -> Point {
    let f = frame.tower();
    let k = rng.gen_range(0..=f.order(Level::Quadratic));
    frame.ell_inf_point((k > 0).then(|| f.element_at(Level::Quadratic, k - 1)))
}

pub fn ell_inf_subline<R: Rng>(frame: &BruckBoseFrame, rng: &mut R) -> BaerSubline {
    loop {
        let [a, b, c] = [0; 3].map(|_| ell_inf_point(frame, rng));
        if let Ok(s) = BaerSubline::through(frame.tower(), &a, &b, &c) {
            return s;
        }
    }
}

/// Coefficients `(c0, c1, c2)` of `λ(θ−ρ1)(θ−ρ2)` with the roots placed as
/// `kind` says: a double root, two roots in `F_{q²}`, or a conjugate pair
/// in `F_{q⁴}∖F_{q²}`. With `avoid_base` no root lies in `F_q`.
pub fn quadratic_with_roots<R: Rng>(f: &FieldTower, rng: &mut R, kind: InfinityType, avoid_base: bool) -> [FElem; 3] {
    let in_q2 = |rng: &mut R| if avoid_base { outside(f, rng, Level::Quadratic, Level::Base) } else { elem(f, rng, Level::Quadratic) };
    let (r1, r2) = match kind {
        InfinityType::Tangent => {
            let r = in_q2(rng);
            (r, r)
        }
        InfinityType::Secant => loop {
            let (a, b) = (in_q2(rng), in_q2(rng));
            if a != b {
                break (a, b);
            }
        },
        InfinityType::Exterior => {
            let r = outside(f, rng, Level::Quartic, Level::Quadratic);
            (r, f.frobenius(r, 2))
        }
    };
    let lam = nonzero(f, rng, Level::Quadratic);
    [f.mul(lam, f.mul(r1, r2)), f.mul(lam, f.neg(f.add(r1, r2))), lam]
}

/// A conic of `PG(2,q²)` meeting `ℓ∞` as `kind` prescribes.
pub fn conic_of_type<R: Rng>(f: &FieldTower, rng: &mut R, kind: InfinityType) -> ConicPG2 {
    loop {
        let m: Matrix = vec![
            vector(f, rng, 3, Level::Quadratic),
            vector(f, rng, 3, Level::Quadratic),
            quadratic_with_roots(f, rng, kind, false).to_vec(),
        ];
        if let Ok(o) = standard_conic_image(f, &m) {
            return o;
        }
    }
}

/// A uniformly random nondegenerate conic of `PG(2,q²)`.
pub fn conic<R: Rng>(f: &FieldTower, rng: &mut R) -> ConicPG2 {
    standard_conic_image(f, &invertible(f, rng, 3, Level::Quadratic)).unwrap()
}

/// `H⁻¹·T̄` for a tangent subplane with frame `H`.
fn base_tangent_point(f: &FieldTower, b: &BaerSubplane) -> Vector {
    let inv = linalg::inverse(f, b.frame()).unwrap();
    let t = b.tangent_point().expect("tangent subplane");
    Point::new(f, linalg::mat_vec(f, &inv, t.coords())).unwrap().into_coords()
}

/// A random `F_q`-conic of a tangent subplane through `T̄`.
pub fn fq_conic_through_t<R: Rng>(f: &FieldTower, rng: &mut R, b: &BaerSubplane) -> FqConic {
    let ut = base_tangent_point(f, b);
    loop {
        let k = linalg::from_columns(&[vector(f, rng, 3, Level::Base), vector(f, rng, 3, Level::Base), ut.clone()]);
        if let Ok(c) = FqConic::in_subplane(f, b, &k) {
            return c;
        }
    }
}

/// A uniformly random `F_q`-conic of a tangent subplane avoiding `T̄`.
pub fn fq_conic_avoiding_t<R: Rng>(f: &FieldTower, rng: &mut R, b: &BaerSubplane) -> FqConic {
    let t = b.tangent_point().expect("tangent subplane");
    loop {
        let k = invertible(f, rng, 3, Level::Base);
        if let Ok(c) = FqConic::in_subplane(f, b, &k) {
            if !c.contains(t) {
                return c;
            }
        }
    }
}

/// An `F_q`-conic of a tangent subplane avoiding `T̄` whose `C⁺` meets
/// `ℓ∞` as `kind` prescribes.
///
/// With `ℓ∞` pulled back to `l = l0 + τ·l1` on the base plane, the columns
/// `k` of the parametrisation satisfy `l0·k = w0`, `l1·k = w1` for the
/// prescribed `w = w0 + τ·w1`.
pub fn fq_conic_avoiding_t_of_type<R: Rng>(f: &FieldTower, rng: &mut R, b: &BaerSubplane, kind: InfinityType) -> FqConic {
    let split = |v: &[FElem]| -> (Vector, Vector) { v.iter().map(|&x| f.base_pair(x).unwrap()).unzip() };
    let (l0, l1) = split(&b.frame()[2]);
    loop {
        let w = quadratic_with_roots(f, rng, kind, true);
        let (w0, w1) = split(&w);
        let rows = vec![l0.clone(), l1.clone(), vector(f, rng, 3, Level::Base)];
        let Some(inv) = linalg::inverse(f, &rows) else { continue };
        let cols: Vec<Vector> =
            (0..3).map(|j| linalg::mat_vec(f, &inv, &[w0[j], w1[j], elem(f, rng, Level::Base)])).collect();
        if let Ok(c) = FqConic::in_subplane(f, b, &linalg::from_columns(&cols)) {
            return c;
        }
    }
}

/// A random affine point of `PG(2,q²)`.
pub fn point_affine<R: Rng>(f: &FieldTower, rng: &mut R) -> Point {
    let mut v = vector(f, rng, 2, Level::Quadratic);
    v.push(FElem::ONE);
    Point::new(f, v).unwrap()
}
