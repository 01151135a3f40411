//! Construction of special curves from prescribed points of `g`, and the
//! recovery of the `F_q`-conic behind a special curve.

use rand::Rng;

use super::baer::{BaerSubplane, BaerType, FqConic};
use super::conic::ConicPG2;
use super::curve::{specialness, RationalCurve, SpecialClass, Transversal};
use crate::bruckbose::BruckBoseFrame;
use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Matrix};
use crate::projective::Point;

/// Where a synthesized curve should meet `Σ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialTarget {
    /// A conic through `G_α` and its conjugate.
    Conic { alpha: Option<FElem> },
    /// A twisted cubic through `G_α`, its conjugate and one rational point
    /// of `Σ∞`.
    TwistedCubic { alpha: Option<FElem> },
    /// An NRC4 through `G_α, G_β` and their conjugates, `α ≠ β`.
    Nrc4Secant { alpha: Option<FElem>, beta: Option<FElem> },
    /// An NRC4 meeting `Σ∞` twice at `G_α` and twice at its conjugate.
    Nrc4Tangent { alpha: Option<FElem> },
    /// An NRC4 through `G_α` for `α ∈ F_{q⁴} ∖ F_{q²}` and its conjugates.
    Nrc4Exterior { alpha: FElem },
}

impl SpecialTarget {
    fn degree(&self) -> usize {
        match self {
            SpecialTarget::Conic { .. } => 2,
            SpecialTarget::TwistedCubic { .. } => 3,
            _ => 4,
        }
    }
}

/// A random element of `level` outside the subfield `avoid`.
fn random_in<R: Rng>(f: &FieldTower, rng: &mut R, level: Level, avoid: Option<Level>) -> FElem {
    loop {
        let x = f.element_at(level, rng.gen_range(0..f.order(level)));
        if !avoid.is_some_and(|a| f.in_level(x, a)) {
            return x;
        }
    }
}

/// `X^{(d)}(θ) ∈ ⟨span⟩` on the first four coordinates, where `X^{(d)}`
/// is the `d`-th derivative of the parametrisation.
struct Condition {
    theta: FElem,
    derivative: usize,
    span: Vec<Vec<FElem>>,
}

impl Condition {
    fn at(theta: FElem, p: &Point) -> Condition {
        Condition { theta, derivative: 0, span: vec![p.coords().to_vec()] }
    }
}

/// `Π (θ − r)` over the given roots.
fn monic_from_roots(f: &FieldTower, roots: &[FElem]) -> Vec<FElem> {
    roots.iter().fold(vec![FElem::ONE], |acc, &r| f.poly_mul(&acc, &[f.neg(r), FElem::ONE]))
}

fn conjugates(f: &FieldTower, x: FElem, count: u32) -> Vec<FElem> {
    (0..count).map(|i| f.frobenius(x, i)).collect()
}

/// A random curve over `F_q` meeting `Σ∞` as prescribed by `target`. The
/// `z` row is fixed by the chosen parameters; the other rows solve the
/// linear conditions `X(θ_i) = λ_i·P_i` and are otherwise random.
pub fn synthesize<R: Rng>(frame: &BruckBoseFrame, target: SpecialTarget, rng: &mut R) -> Result<RationalCurve> {
    let f = frame.tower();
    let n = target.degree();
    for _ in 0..64 {
        let t1 = random_in(f, rng, Level::Quadratic, Some(Level::Base));
        let (z_roots, conds): (Vec<FElem>, Vec<Condition>) = match target {
            SpecialTarget::Conic { alpha } => (conjugates(f, t1, 2), vec![Condition::at(t1, &frame.g_point(alpha))]),
            SpecialTarget::TwistedCubic { alpha } => {
                let t0 = random_in(f, rng, Level::Base, None);
                let mut r = conjugates(f, t1, 2);
                r.push(t0);
                (r, vec![Condition::at(t1, &frame.g_point(alpha))])
            }
            SpecialTarget::Nrc4Secant { alpha, beta } => {
                if alpha == beta {
                    return Err(Error::InvalidInput("secant target needs two distinct points".into()));
                }
                let t2 = random_in(f, rng, Level::Quadratic, Some(Level::Base));
                if t2 == t1 || t2 == f.frobenius(t1, 1) {
                    continue;
                }
                let mut r = conjugates(f, t1, 2);
                r.extend(conjugates(f, t2, 2));
                (r, vec![Condition::at(t1, &frame.g_point(alpha)), Condition::at(t2, &frame.g_point(beta))])
            }
            SpecialTarget::Nrc4Tangent { alpha } => {
                // double meet with Σ∞ at θ1, tangent to g there
                let mut r = conjugates(f, t1, 2);
                r.extend(conjugates(f, t1, 2));
                let tangent = Condition { theta: t1, derivative: 1, span: vec![frame.a0().clone(), frame.a1().clone()] };
                (r, vec![Condition::at(t1, &frame.g_point(alpha)), tangent])
            }
            SpecialTarget::Nrc4Exterior { alpha } => {
                if f.in_level(alpha, Level::Quadratic) {
                    return Err(Error::InvalidInput("exterior target needs α outside F_{q²}".into()));
                }
                let t = random_in(f, rng, Level::Quartic, Some(Level::Quadratic));
                (conjugates(f, t, 4), vec![Condition::at(t, &frame.g_point(Some(alpha)))])
            }
        };
        let z = monic_from_roots(f, &z_roots);
        debug_assert!(z.iter().all(|c| f.in_level(*c, Level::Base)));
        let Some(matrix) = solve_rows(f, n, &z, &conds, rng) else { continue };
        if let Ok(curve) = RationalCurve::new(f, matrix) {
            return Ok(curve);
        }
    }
    Err(Error::Degenerate("no nondegenerate curve found for the target".into()))
}

/// Unknowns: the `4(n+1)` entries of rows `0..4` over `F_q`, then the four
/// base coordinates of each span coefficient.
fn solve_rows<R: Rng>(f: &FieldTower, n: usize, z: &[FElem], conds: &[Condition], rng: &mut R) -> Option<Matrix> {
    let nm = 4 * (n + 1);
    let nl: usize = conds.iter().map(|c| c.span.len()).sum();
    let nu = nm + 4 * nl;
    let basis: Vec<FElem> = (0..4)
        .map(|j| {
            let mut c = [FElem::ZERO; 4];
            c[j] = FElem::ONE;
            f.from_base_coordinates(c)
        })
        .collect();
    let mut rows: Matrix = Vec::new();
    let mut offset = nm;
    for cond in conds {
        let powers: Vec<FElem> = (0..=n)
            .map(|j| match cond.derivative {
                0 => f.pow(cond.theta, j as u64),
                _ if j == 0 => FElem::ZERO,
                _ => f.mul(f.from_int(j as i64), f.pow(cond.theta, j as u64 - 1)),
            })
            .collect();
        for k in 0..4 {
            // Σ_j M[k][j] (θ^j)^{(d)} − Σ_s λ_s·span_s[k] = 0, in base coordinates
            let mut eqs = vec![vec![FElem::ZERO; nu]; 4];
            for (j, pw) in powers.iter().enumerate() {
                for (e, ce) in eqs.iter_mut().zip(f.base_coordinates(*pw)) {
                    e[k * (n + 1) + j] = ce;
                }
            }
            for (s_idx, v) in cond.span.iter().enumerate() {
                for (l, b) in basis.iter().enumerate() {
                    for (e, ce) in eqs.iter_mut().zip(f.base_coordinates(f.mul(*b, v[k]))) {
                        e[offset + 4 * s_idx + l] = f.neg(ce);
                    }
                }
            }
            rows.extend(eqs.into_iter().filter(|e| e.iter().any(|x| !x.is_zero())));
        }
        offset += 4 * cond.span.len();
    }
    let ns = linalg::nullspace(f, &rows, nu);
    if ns.is_empty() {
        return None;
    }
    let mut sol = vec![FElem::ZERO; nu];
    for v in &ns {
        let c = f.element_at(Level::Base, rng.gen_range(0..f.q() as usize));
        sol = linalg::add(f, &sol, &linalg::scale(f, v, c));
    }
    // the point conditions must not be met by the zero vector
    let mut offset = nm;
    for cond in conds {
        if cond.derivative == 0 && sol[offset..offset + 4].iter().all(|x| x.is_zero()) {
            return None;
        }
        offset += 4 * cond.span.len();
    }
    let mut m: Matrix = (0..4).map(|k| sol[k * (n + 1)..(k + 1) * (n + 1)].to_vec()).collect();
    let mut zrow = z.to_vec();
    zrow.resize(n + 1, FElem::ZERO);
    m.push(zrow);
    Some(m)
}

/// The `F_q`-conic `C` (in a tangent Baer subplane) with `[C]` equal to a
/// special twisted cubic or NRC4, discovered from three affine points of
/// the curve and its points on `g`.
#[derive(Clone, Debug)]
pub struct Recovered {
    pub conic: FqConic,
    pub subplane: BaerSubplane,
    /// `C⁺ ∩ ℓ∞` used to fit `C⁺`, possibly over `F_{q⁴}`.
    pub ell_inf: Vec<Point>,
}

pub fn recover_fq_conic(frame: &BruckBoseFrame, curve: &RationalCurve) -> Result<Recovered> {
    let f = frame.tower();
    let spec = specialness(frame, curve);
    let affine: Vec<Point> = curve
        .parametrized_points(f, Level::Base)
        .into_iter()
        .map(|(_, p)| p)
        .filter(|p| !p.coords()[4].is_zero())
        .take(3)
        .map(|p| frame.bb_unmap(&p))
        .collect::<Result<_>>()?;
    if affine.len() < 3 {
        return Err(Error::Degenerate("fewer than three affine points".into()));
    }
    let (a, b, c) = (&affine[0], &affine[1], &affine[2]);
    let on_g: Vec<Option<FElem>> =
        spec.witnesses.iter().filter(|w| w.line == Transversal::G).map(|w| w.alpha).collect();
    let (cplus, ell_inf) = match spec.class {
        SpecialClass::GSpecialTwistedCubic => {
            let x = curve
                .parametrized_points(f, Level::Base)
                .into_iter()
                .map(|(_, p)| p)
                .find(|p| p.coords()[4].is_zero())
                .ok_or_else(|| Error::Degenerate("twisted cubic misses Σ∞".into()))?;
            let t = frame.ell_inf_point(frame.spread_delta_of(&x).unwrap());
            let p = frame.ell_inf_point(on_g[0]);
            let quad = BaerSubplane::from_quadrangle(f, [&t, a, b, c])?;
            if quad.infinity_type() != BaerType::Tangent {
                return Err(Error::Degenerate("T̄ with three curve points spans a secant subplane".into()));
            }
            (ConicPG2::through_five(f, &[t.clone(), p.clone(), a.clone(), b.clone(), c.clone()])?, vec![t, p])
        }
        SpecialClass::GSpecialNrc4 if on_g.len() == 1 => {
            let p = frame.ell_inf_point(on_g[0]);
            (ConicPG2::through_three_tangent_at(f, a, b, c, &p)?, vec![p])
        }
        SpecialClass::GSpecialNrc4 | SpecialClass::GStarSpecialNrc4 => {
            let (p, q) = (frame.ell_inf_point(on_g[0]), frame.ell_inf_point(on_g[1]));
            (ConicPG2::through_five(f, &[p.clone(), q.clone(), a.clone(), b.clone(), c.clone()])?, vec![p, q])
        }
        other => return Err(Error::InvalidInput(format!("curve class {other:?} has no F_q-conic"))),
    };
    if !cplus.is_defined_over(f, Level::Quadratic) {
        return Err(Error::Degenerate("fitted conic is not over F_q²".into()));
    }
    let conic = FqConic::through(f, &cplus, a, b, c)?;
    let subplane = conic.host(f);
    Ok(Recovered { conic, subplane, ell_inf })
}

/// Whether `[C]` has exactly the rational points of `curve`.
pub fn image_matches(frame: &BruckBoseFrame, conic: &FqConic, curve: &RationalCurve) -> bool {
    let f = frame.tower();
    let Ok(image) = RationalCurve::bb_image_of_fq_conic(f, conic) else { return false };
    image.points(f, Level::Base) == curve.points(f, Level::Base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn round_trip(q: u32, target: SpecialTarget, class: SpecialClass) {
        let f = FieldTower::new(q).unwrap();
        let frame = BruckBoseFrame::new(f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let curve = synthesize(&frame, target, &mut rng).unwrap();
            assert!(curve.is_defined_over(&f, Level::Base));
            assert_eq!(specialness(&frame, &curve).class, class, "q={q} {target:?}");
            if class != SpecialClass::GSpecialConic {
                let rec = recover_fq_conic(&frame, &curve).unwrap();
                assert_eq!(rec.subplane.infinity_type(), BaerType::Tangent);
                assert!(image_matches(&frame, &rec.conic, &curve), "q={q} {target:?}");
            }
        }
    }

    #[test]
    fn conics_and_twisted_cubics() {
        let f = FieldTower::new(7).unwrap();
        round_trip(7, SpecialTarget::Conic { alpha: Some(f.tau()) }, SpecialClass::GSpecialConic);
        round_trip(7, SpecialTarget::TwistedCubic { alpha: Some(FElem::ONE) }, SpecialClass::GSpecialTwistedCubic);
        round_trip(7, SpecialTarget::TwistedCubic { alpha: None }, SpecialClass::GSpecialTwistedCubic);
    }

    #[test]
    fn normal_rational_curves() {
        let f = FieldTower::new(8).unwrap();
        let tau = f.tau();
        round_trip(8, SpecialTarget::Nrc4Secant { alpha: Some(tau), beta: None }, SpecialClass::GSpecialNrc4);
        round_trip(8, SpecialTarget::Nrc4Tangent { alpha: Some(FElem::ZERO) }, SpecialClass::GSpecialNrc4);
        round_trip(8, SpecialTarget::Nrc4Exterior { alpha: f.sigma() }, SpecialClass::GStarSpecialNrc4);
    }
}
