//! The quadric pencil of a conic and its locus in `Σ∞` at each level.

use std::collections::HashSet;

use super::conic::ConicPG2;
use super::quadric::{QuadricForm, QuadricPencil, MONOMIALS};
use crate::bruckbose::BruckBoseFrame;
use crate::error::{Error, Result};
use crate::gf::{FElem, FieldTower, Level};
use crate::linalg::{self, Vector};
use crate::projective::{enumerate_points, Point, Subspace};

/// Substitutes `x = x0 + x1τ`, `y = y0 + y1τ` into the conic and splits the
/// result as `f∞ + τ·f0`.
pub fn conic_to_pencil(frame: &BruckBoseFrame, o: &ConicPG2) -> Result<QuadricPencil> {
    let f = frame.tower();
    let (o1, z, t) = (FElem::ONE, FElem::ZERO, f.tau());
    let x = [o1, t, z, z, z];
    let y = [z, z, o1, t, z];
    let w = [z, z, z, z, o1];
    let [a, b, c, d, e, g] = *o.coeffs();
    let mut total = [FElem::ZERO; MONOMIALS];
    for (coef, l, m) in [(a, &x, &x), (b, &y, &y), (c, &w, &w), (d, &x, &y), (e, &x, &w), (g, &y, &w)] {
        let prod = QuadricForm::product(f, l, m);
        for (acc, p) in total.iter_mut().zip(prod) {
            *acc = f.add(*acc, f.mul(coef, p));
        }
    }
    let mut inf = [FElem::ZERO; MONOMIALS];
    let mut zero = [FElem::ZERO; MONOMIALS];
    for k in 0..MONOMIALS {
        let (c0, c1) = f.base_pair(total[k]).expect("conic coefficients lie in F_q²");
        inf[k] = c0;
        zero[k] = c1;
    }
    Ok(QuadricPencil { qinf: QuadricForm::new(inf)?, q0: QuadricForm::new(zero)? })
}

/// Points of the extended `g` on the pencil member `Q_t`, over `level`.
pub fn pencil_member_on_g(frame: &BruckBoseFrame, pencil: &QuadricPencil, t: Option<FElem>, level: Level) -> Result<Vec<Point>> {
    let f = frame.tower();
    let member = pencil.member(f, t).ok_or_else(|| Error::Degenerate("zero pencil member".into()))?;
    let (a, b, c) = member.restrict_to_line(f, frame.a0(), frame.a1());
    let roots = f
        .binary_quadratic_roots(a, b, c, level)
        .ok_or_else(|| Error::Degenerate("pencil member contains g".into()))?;
    let mut pts: Vec<Point> = roots.into_iter().map(|alpha| frame.g_point(alpha)).collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// The base locus of the pencil inside the extended `Σ∞`, as a sorted set of
/// lines.
pub fn locus_at_infinity(frame: &BruckBoseFrame, pencil: &QuadricPencil, level: Level) -> Result<Vec<Subspace>> {
    if level == Level::Base {
        return base_locus(frame, pencil);
    }
    let f = frame.tower();
    let forms = [&pencil.qinf, &pencil.q0];
    let a0 = frame.a0().clone();
    let a1 = frame.a1().clone();
    let a0q = linalg::frobenius(f, &a0, 1);
    let a1q = linalg::frobenius(f, &a1, 1);
    let mut full: HashSet<Subspace> = HashSet::new();
    let mut loose: HashSet<Point> = HashSet::new();

    // g and g^q themselves
    for (p, r) in [(&a0, &a1), (&a0q, &a1q)] {
        let restr: Vec<_> = forms.iter().map(|qf| qf.restrict_to_line(f, p, r)).collect();
        if restr.iter().all(|&(x, y, z)| x.is_zero() && y.is_zero() && z.is_zero()) {
            full.insert(Subspace::from_vectors(f, 4, &[p.clone(), r.clone()]));
        } else {
            for pt in common_points(f, &restr, p, r, level) {
                loose.insert(pt);
            }
        }
    }

    struct Form {
        ga: [FElem; 3],
        gc: [FElem; 3],
        b00: FElem,
        b01: FElem,
        b10: FElem,
        b11: FElem,
    }
    let data: Vec<Form> = forms
        .iter()
        .map(|qf| Form {
            ga: [qf.eval(f, &a0), qf.polar(f, &a0, &a1), qf.eval(f, &a1)],
            gc: [qf.eval(f, &a0q), qf.polar(f, &a0q, &a1q), qf.eval(f, &a1q)],
            b00: qf.polar(f, &a0, &a0q),
            b01: qf.polar(f, &a0, &a1q),
            b10: qf.polar(f, &a1, &a0q),
            b11: qf.polar(f, &a1, &a1q),
        })
        .collect();
    let gvec = |beta: Option<FElem>| -> Vector {
        match beta {
            None => a0.clone(),
            Some(b) => linalg::add(f, &linalg::scale(f, &a0, b), &a1),
        }
    };
    let gqvec = |gamma: Option<FElem>| -> Vector {
        match gamma {
            None => a0q.clone(),
            Some(c) => linalg::add(f, &linalg::scale(f, &a0q, c), &a1q),
        }
    };
    let params: Vec<Option<FElem>> = f.elements(level).map(Some).chain([None]).collect();
    for &beta in &params {
        let gb = gvec(beta);
        // per form: a (constant), b(γ) = b1 γ + b0, c(γ) = c2 γ² + c1 γ + c0
        let polys: Vec<(FElem, [FElem; 2], [FElem; 3])> = data
            .iter()
            .map(|d| {
                let a = match beta {
                    None => d.ga[0],
                    Some(x) => f.add(f.add(f.mul(d.ga[0], f.mul(x, x)), f.mul(d.ga[1], x)), d.ga[2]),
                };
                let (b1, b0) = match beta {
                    None => (d.b00, d.b01),
                    Some(x) => (f.add(f.mul(x, d.b00), d.b10), f.add(f.mul(x, d.b01), d.b11)),
                };
                (a, [b0, b1], [d.gc[2], d.gc[1], d.gc[0]])
            })
            .collect();
        let (a, b, c) = &polys[0];
        let (a2, b2, c2) = &polys[1];
        // resultant (ac' − a'c)² − (ab' − a'b)(bc' − b'c) as a polynomial in γ
        let u = f.poly_add(&f.poly_scale(c2, *a), &f.poly_scale(c, f.neg(*a2)));
        let v = f.poly_add(&f.poly_scale(b2, *a), &f.poly_scale(b, f.neg(*a2)));
        let w = f.poly_add(&f.poly_mul(b, c2), &f.poly_scale(&f.poly_mul(b2, c), f.neg(FElem::ONE)));
        let res = f.poly_add(&f.poly_mul(&u, &u), &f.poly_scale(&f.poly_mul(&v, &w), f.neg(FElem::ONE)));
        let identically_zero = res.iter().all(|x| x.is_zero());
        for &gamma in &params {
            let candidate = match gamma {
                None => true,
                Some(x) => identically_zero || f.eval_poly(&res, x).is_zero(),
            };
            if !candidate {
                continue;
            }
            let gc = gqvec(gamma);
            let restr: Vec<_> = forms.iter().map(|qf| qf.restrict_to_line(f, &gb, &gc)).collect();
            if restr.iter().all(|&(x, y, z)| x.is_zero() && y.is_zero() && z.is_zero()) {
                full.insert(Subspace::from_vectors(f, 4, &[gb.clone(), gc]));
            } else {
                for pt in common_points(f, &restr, &gb, &gc, level) {
                    loose.insert(pt);
                }
            }
        }
    }
    let mut lines: Vec<Subspace> = full.into_iter().collect();
    lines.sort();
    let mut loose: Vec<Point> = loose.into_iter().collect();
    loose.sort();
    if let Some(p) = loose.iter().find(|p| !lines.iter().any(|l| l.contains_point(f, p))) {
        return Err(Error::NotUnionOfLines(format!("{p:?}")));
    }
    Ok(lines)
}

/// Points `s·p + t·r` (over `level`) on both quadrics, given their
/// restrictions; at least one restriction is nonzero.
fn common_points(f: &FieldTower, restr: &[(FElem, FElem, FElem)], p: &[FElem], r: &[FElem], level: Level) -> Vec<Point> {
    let root_sets: Vec<Option<Vec<Option<FElem>>>> =
        restr.iter().map(|&(a, b, c)| f.binary_quadratic_roots(a, b, c, level)).collect();
    let mut candidates: Option<Vec<Option<FElem>>> = None;
    for roots in root_sets.into_iter().flatten() {
        candidates = Some(match candidates {
            None => roots,
            Some(prev) => prev.into_iter().filter(|x| roots.contains(x)).collect(),
        });
    }
    let mut out: Vec<Point> = candidates
        .unwrap_or_default()
        .into_iter()
        .map(|st| {
            let v = match st {
                None => p.to_vec(),
                Some(s) => linalg::add(f, &linalg::scale(f, p, s), r),
            };
            Point::new(f, v).unwrap()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn base_locus(frame: &BruckBoseFrame, pencil: &QuadricPencil) -> Result<Vec<Subspace>> {
    let f = frame.tower();
    let q = f.q() as usize;
    let mut groups: std::collections::BTreeMap<usize, (Option<FElem>, usize)> = Default::default();
    for p3 in enumerate_points(f, 3, Level::Base)? {
        let mut v = p3.into_coords();
        v.push(FElem::ZERO);
        if pencil.base_locus_contains(f, &v) {
            let p = Point::new(f, v).unwrap();
            let delta = frame.spread_delta_of(&p).expect("rational point of Σ∞");
            let key = delta.map_or(usize::MAX, |d| f.index_of(d));
            groups.entry(key).or_insert((delta, 0)).1 += 1;
        }
    }
    let mut lines = Vec::new();
    for (_, (delta, count)) in groups {
        if count != q + 1 {
            return Err(Error::NotUnionOfLines(format!("{count} points on the spread line of {delta:?}")));
        }
        lines.push(frame.spread_line(delta).clone());
    }
    lines.sort();
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moment_conic(f: &FieldTower) -> ConicPG2 {
        let z = FElem::ZERO;
        ConicPG2::new(f, [z, FElem::ONE, z, z, f.neg(FElem::ONE), z]).unwrap()
    }

    #[test]
    fn pencil_of_the_moment_conic() {
        let f = FieldTower::new(5).unwrap();
        let frame = BruckBoseFrame::new(f.clone());
        let pencil = conic_to_pencil(&frame, &moment_conic(&f)).unwrap();
        let o = FElem::ONE;
        let m1 = f.neg(o);
        let expect_inf =
            QuadricForm::from_terms(&f, &[(2, 2, o), (3, 3, f.t0()), (0, 4, m1)]).unwrap();
        let expect_zero =
            QuadricForm::from_terms(&f, &[(3, 3, f.t1()), (2, 3, f.from_int(2)), (1, 4, m1)]).unwrap();
        assert_eq!(pencil.qinf, expect_inf);
        assert_eq!(pencil.q0, expect_zero);
    }

    #[test]
    fn tangent_locus_is_one_line_at_every_level() {
        for q in [3, 4] {
            let f = FieldTower::new(q).unwrap();
            let frame = BruckBoseFrame::new(f.clone());
            let pencil = conic_to_pencil(&frame, &moment_conic(&f)).unwrap();
            for level in Level::ALL {
                let lines = locus_at_infinity(&frame, &pencil, level).unwrap();
                assert_eq!(lines, vec![frame.spread_line(None).clone()], "q={q} {level:?}");
            }
            for t in f.elements(Level::Base).map(Some).chain([None]) {
                let pts = pencil_member_on_g(&frame, &pencil, t, Level::Quadratic).unwrap();
                assert_eq!(pts, vec![frame.g_point(None)]);
            }
        }
    }
}
