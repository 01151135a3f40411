//! `F_q`-conics of Baer subplanes and the normal rational curves they
//! become in `PG(4,q)`.

use bbgeom::linalg::{self, Matrix, Vector};
use bbgeom::regulus::transversal_through;
use bbgeom::varieties::curve::Transversal;
use bbgeom::varieties::synth::image_matches;
use bbgeom::varieties::{
    recover_fq_conic, special_conic_wrt, specialness, synthesize, BaerSubplane, BaerType, FqConic, InfinityType, RationalCurve,
    RuledCubicSurface, SpecialClass, SpecialTarget,
};
use bbgeom::{BruckBoseFrame, FElem, FieldTower, Level, Point, Result, Subspace};
use rand::Rng;
use serde_json::{json, Value};

use super::gated;
use crate::context::{mat, param, pts, sub, Ctx, Evidence};
use crate::gen;

fn param_json(c: &FqConic) -> Value {
    mat(c.param())
}

/// `λ(θ−r1)(θ−r2)` over `F_q`: a double root or two roots in `F_q`, or a
/// conjugate pair in `F_{q²}`, as the conic `θ ↦ (…, …, this)` should
/// meet the line `z = 0`.
fn base_quadratic<R: Rng>(f: &FieldTower, rng: &mut R, kind: InfinityType) -> Vector {
    let (r1, r2) = match kind {
        InfinityType::Tangent => {
            let r = gen::elem(f, rng, Level::Base);
            (r, r)
        }
        InfinityType::Secant => loop {
            let (a, b) = (gen::elem(f, rng, Level::Base), gen::elem(f, rng, Level::Base));
            if a != b {
                break (a, b);
            }
        },
        InfinityType::Exterior => {
            let r = gen::outside(f, rng, Level::Quadratic, Level::Base);
            (r, f.frobenius(r, 1))
        }
    };
    let lam = gen::nonzero(f, rng, Level::Base);
    vec![f.mul(lam, f.mul(r1, r2)), f.mul(lam, f.neg(f.add(r1, r2))), lam]
}

/// A conic parametrisation over `F_q` whose conic meets `z = 0` as `kind`
/// prescribes.
fn base_param<R: Rng>(f: &FieldTower, rng: &mut R, kind: InfinityType) -> Matrix {
    loop {
        let m = vec![gen::vector(f, rng, 3, Level::Base), gen::vector(f, rng, 3, Level::Base), base_quadratic(f, rng, kind)];
        if linalg::inverse(f, &m).is_some() {
            return m;
        }
    }
}

const TYPES: [InfinityType; 3] = [InfinityType::Tangent, InfinityType::Secant, InfinityType::Exterior];

fn at_sigma_inf(f: &FieldTower, curve: &RationalCurve) -> Vec<Point> {
    curve.points(f, Level::Base).into_iter().filter(|p| p.coords()[4].is_zero()).collect()
}

fn affine_images(frame: &BruckBoseFrame, points: &[Point]) -> Result<Vec<Point>> {
    let mut v: Vec<Point> =
        points.iter().filter(|p| !p.coords()[2].is_zero()).map(|p| frame.bb_map(p)).collect::<Result<_>>()?;
    v.sort();
    Ok(v)
}

fn affine_part(f: &FieldTower, curve: &RationalCurve) -> Vec<Point> {
    curve.points(f, Level::Base).into_iter().filter(|p| !p.coords()[4].is_zero()).collect()
}

fn meet_of(f: &FieldTower, a: &Subspace, line: &Subspace) -> Option<Point> {
    a.meet(f, line).as_point()
}

pub fn sect_conic(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for i in 0..ctx.n.max(3) {
        let b = gen::secant_subplane(f, &mut rng);
        let c = FqConic::in_subplane(f, &b, &base_param(f, &mut rng, TYPES[i % 3]))?;
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let plane = Subspace::span_points(f, &affine_images(frame, b.points())?)?;
        let roots = c.cplus().ell_inf_roots(f, Level::Quadratic);
        let (p, q) = (roots[0], roots[roots.len() - 1]);
        let (pbar, qbar) = (frame.ell_inf_point(p), frame.ell_inf_point(q));
        let meet = at_sigma_inf(f, &curve);
        let witness = || json!({ "subplane_frame": mat(b.frame()), "conic_param": param_json(&c), "P": param(p), "Q": param(q) });
        let base_ok = curve.degree() == 2
            && curve.span(f) == plane
            && affine_part(f, &curve) == affine_images(frame, c.points())?
            && roots.len() == 2;
        if !ev.require(base_ok, "[C] is a conic of the plane [B] and C⁺ meets ℓ∞ twice", witness) {
            break;
        }
        let ok = if p == q {
            ev.bump("case1");
            b.contains(&pbar) && meet.len() == 1 && Some(&meet[0]) == meet_of(f, &plane, frame.spread_line(p)).as_ref()
        } else if b.contains(&pbar) && b.contains(&qbar) {
            ev.bump("case2");
            let mut expect: Vec<Point> = [p, q].iter().filter_map(|&d| meet_of(f, &plane, frame.spread_line(d))).collect();
            expect.sort();
            meet == expect
        } else {
            ev.bump("case3");
            !b.contains(&pbar) && !b.contains(&qbar) && meet.is_empty() && special_conic_wrt(frame, (p, q), &curve)?
        };
        if !ev.require(ok, "[C] meets Σ∞ as C⁺ ∩ ℓ∞ and B prescribe", witness) {
            break;
        }
    }
    Ok(ev)
}

/// Columns `u1, u2, u3` scaled so their sum is `u4`.
fn scaled_frame(f: &FieldTower, u: &[Vector; 4]) -> Option<Matrix> {
    let lam = linalg::coordinates(f, &u[..3], &u[3])?;
    if lam.iter().any(|l| l.is_zero()) {
        return None;
    }
    Some(linalg::from_columns(&(0..3).map(|i| linalg::scale(f, &u[i], lam[i])).collect::<Vec<_>>()))
}

pub fn sect_conic_converse(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let sigma_form = {
        let mut v = vec![FElem::ZERO; 5];
        v[4] = FElem::ONE;
        v
    };
    let mut i = 0;
    while i < ctx.n.max(3) {
        // a plane meeting Σ∞ in a line that is not a spread line
        let s1 = gen::vector(f, &mut rng, 4, Level::Base);
        let s2 = gen::vector(f, &mut rng, 4, Level::Base);
        let mut a = gen::vector(f, &mut rng, 4, Level::Base);
        a.push(FElem::ONE);
        let basis: Matrix = [s1, s2].into_iter().map(|mut v| { v.push(FElem::ZERO); v }).chain([a]).collect();
        let alpha = Subspace::from_vectors(f, 4, &basis);
        if alpha.rank() != 3 || frame.spread().iter().any(|l| alpha.contains(f, l)) {
            continue;
        }
        let malpha = base_param(f, &mut rng, TYPES[i % 3]);
        i += 1;
        let n = RationalCurve::new(f, linalg::mat_mul(f, &linalg::transpose(&basis), &malpha))?;
        // the BB correspondence restricted to α, fixed by a quadrangle
        let quad_alpha: [Vector; 4] = loop {
            let u = [0; 4].map(|_| {
                let mut v = gen::vector(f, &mut rng, 2, Level::Base);
                v.push(FElem::ONE);
                v
            });
            if scaled_frame(f, &u).is_some() && scaled_frame(f, &[u[1].clone(), u[2].clone(), u[3].clone(), u[0].clone()]).is_some() {
                break u;
            }
        };
        let quad: Vec<Point> = quad_alpha
            .iter()
            .map(|u| frame.bb_unmap(&Point::new(f, linalg::mat_vec(f, &linalg::transpose(&basis), u)).unwrap()))
            .collect::<Result<_>>()?;
        let b = BaerSubplane::from_quadrangle(f, [&quad[0], &quad[1], &quad[2], &quad[3]])?;
        let u = scaled_frame(f, &quad_alpha).unwrap();
        let k = linalg::mat_mul(f, b.frame(), &linalg::inverse(f, &u).unwrap());
        let c = FqConic::from_param(f, linalg::mat_mul(f, &k, &malpha))?;
        let witness = || json!({ "plane": sub(&alpha), "curve": mat(n.matrix()) });
        let b_images = affine_images(frame, b.points())?;
        let ok1 = b.infinity_type() == BaerType::Secant
            && b_images.iter().all(|x| alpha.contains_point(f, x))
            && b_images.len() == f.q() as usize * f.q() as usize
            && RationalCurve::bb_image_of_fq_conic(f, &c)?.points(f, Level::Base) == n.points(f, Level::Base);
        if !ev.require(ok1, "α = [B] for a secant B and N = [C] for an F_q-conic C of B", witness) {
            break;
        }
        let meet = at_sigma_inf(f, &n);
        let roots = c.cplus().ell_inf_roots(f, Level::Quadratic);
        let ok = if !meet.is_empty() {
            ev.bump("meets_sigma_inf");
            meet.iter().all(|x| c.contains(&frame.ell_inf_point(frame.spread_delta_of(x).unwrap())))
        } else {
            ev.bump("special");
            let roots_q2 = n.hyperplane_meet(f, &sigma_form, Level::Quadratic).unwrap_or_default();
            let y = n.point(f, roots_q2[0].value);
            match transversal_through(f, &y, &frame.g(), &frame.gq()) {
                None => false,
                Some(line) => {
                    let p_pt = line.meet(f, &frame.g()).as_point().unwrap();
                    let q_pt = line.meet(f, &frame.gq()).as_point().unwrap().frobenius(f, 1);
                    let (p, q) = (frame.g_parameter(&p_pt).unwrap(), frame.g_parameter(&q_pt).unwrap());
                    let mut expect = vec![p, q];
                    let mut got = roots.clone();
                    expect.sort();
                    got.sort();
                    special_conic_wrt(frame, (p, q), &n)? && expect == got
                }
            }
        };
        if !ev.require(ok, "C⁺ ∩ ℓ∞ is read off from N ∩ Σ∞ or its special pair", witness) {
            break;
        }
    }
    Ok(ev)
}

fn surface_contains(f: &FieldTower, quadrics: &[bbgeom::varieties::QuadricForm], points: &[Point]) -> bool {
    points.iter().all(|p| RuledCubicSurface::equations_contain(f, quadrics, p))
}

pub fn cath_conic(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = ctx.q();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::secant_subplane(f, &mut rng);
        let c = FqConic::in_subplane(f, &b, &gen::invertible(f, &mut rng, 3, Level::Base))?;
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let plane = Subspace::span_points(f, &affine_images(frame, b.points())?)?;
        ev.bump("part1");
        let ok = curve.degree() == 2 && curve.span(f) == plane && affine_part(f, &curve) == affine_images(frame, c.points())?;
        if !ev.require(ok, "a conic of a secant B is a conic of the plane [B]", || json!({ "conic_param": param_json(&c) })) {
            return Ok(ev);
        }
    }
    for (part, through_t, degree, min_q) in [("part2", true, 3, 3), ("part3", false, 4, 4)] {
        if q < min_q {
            ev.set(&format!("{part}_not_claimed_below_q{min_q}"), 1);
            continue;
        }
        for _ in 0..ctx.n {
            let b = gen::tangent_subplane(f, &mut rng);
            let c = if through_t { gen::fq_conic_through_t(f, &mut rng, &b) } else { gen::fq_conic_avoiding_t(f, &mut rng, &b) };
            let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
            let quadrics = RuledCubicSurface::from_tangent_subplane(frame, &b)?.quadrics(f);
            ev.bump(part);
            let ok = curve.degree() == degree
                && curve.span(f).rank() == degree + 1
                && surface_contains(f, &quadrics, &curve.points(f, Level::Base))
                && affine_part(f, &curve) == affine_images(frame, c.points())?;
            if !ev.require(ok, &format!("a conic of a tangent B is a degree-{degree} normal rational curve on [B]"), || {
                json!({ "subplane_frame": mat(b.frame()), "conic_param": param_json(&c), "degree": curve.degree() })
            }) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

fn tgt_conic_t1_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::tangent_subplane(f, &mut rng);
        let c = gen::fq_conic_through_t(f, &mut rng, &b);
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let class = specialness(frame, &curve).class;
        ev.bump("conics");
        if !ev.require(class == SpecialClass::GSpecialTwistedCubic, "[C] is a g-special twisted cubic", || {
            json!({ "subplane_frame": mat(b.frame()), "conic_param": param_json(&c), "class": format!("{class:?}") })
        }) {
            break;
        }
    }
    Ok(ev)
}

pub fn tgt_conic_t1(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 5, tgt_conic_t1_run)
}

fn tgt_conic_t2_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let b = gen::tangent_subplane(f, &mut rng);
        let t = b.tangent_point().unwrap().clone();
        let c = gen::fq_conic_through_t(f, &mut rng, &b);
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let spec = specialness(frame, &curve);
        let others: Vec<Option<FElem>> =
            c.cplus().ell_inf_roots(f, Level::Quadratic).into_iter().filter(|&d| frame.ell_inf_point(d) != t).collect();
        ev.bump("conics");
        let ok = match others.as_slice() {
            [d] => {
                let p = frame.g_point(*d);
                spec.points_on(Transversal::G) == vec![&p] && spec.points_on(Transversal::Gq) == vec![&p.frobenius(f, 1)]
            }
            _ => false,
        };
        if !ev.require(ok, "[C]⋆ meets g, g^q in P, P^q for C⁺ ∩ ℓ∞ = {T̄, P̄}", || {
            json!({ "conic_param": param_json(&c), "P": others.iter().map(|&d| param(d)).collect::<Vec<_>>(), "on_g": pts(spec.points_on(Transversal::G)) })
        }) {
            break;
        }
        ev.example(|| json!({ "P": param(others[0]), "witnesses": pts(spec.witnesses.iter().map(|w| &w.point)) }));
    }
    Ok(ev)
}

pub fn tgt_conic_t2(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 5, tgt_conic_t2_run)
}

fn random_param<R: Rng>(f: &FieldTower, rng: &mut R) -> Option<FElem> {
    let k = rng.gen_range(0..=f.order(Level::Quadratic));
    (k > 0).then(|| f.element_at(Level::Quadratic, k - 1))
}

/// Checks a curve's recovered conic: a tangent host, `T̄ ∈ C` as asked,
/// `[C]` equal to the curve, and `C⁺ ∩ ℓ∞` at the prescribed parameters.
fn check_recovery(frame: &BruckBoseFrame, curve: &RationalCurve, through_t: bool, expect: &[Option<FElem>], level: Level) -> Result<bool> {
    let f = frame.tower();
    let rec = recover_fq_conic(frame, curve)?;
    let Some(t) = rec.subplane.tangent_point() else { return Ok(false) };
    let mut roots = rec.conic.cplus().ell_inf_roots(f, level);
    roots.sort();
    roots.dedup();
    let mut expect = expect.to_vec();
    expect.sort();
    expect.dedup();
    Ok(rec.conic.contains(t) == through_t && image_matches(frame, &rec.conic, curve) && expect.iter().all(|d| roots.contains(d)))
}

fn conv_tgt_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for _ in 0..ctx.n {
        let alpha = random_param(ctx.f(), &mut rng);
        let curve = synthesize(frame, SpecialTarget::TwistedCubic { alpha }, &mut rng)?;
        ev.bump("synthesized_cubics");
        let ok = specialness(frame, &curve).class == SpecialClass::GSpecialTwistedCubic && check_recovery(frame, &curve, true, &[alpha], Level::Quadratic)?;
        if !ev.require(ok, "a g-special twisted cubic is [C] for an F_q-conic C through T̄ of a tangent B", || {
            json!({ "curve": mat(curve.matrix()), "alpha": param(alpha) })
        }) {
            break;
        }
    }
    Ok(ev)
}

pub fn conv_tgt(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 5, conv_tgt_run)
}

fn expected_class(kind: InfinityType) -> SpecialClass {
    match kind {
        InfinityType::Exterior => SpecialClass::GStarSpecialNrc4,
        _ => SpecialClass::GSpecialNrc4,
    }
}

/// Conics avoiding `T̄`: odd draws cycle through the three types, even
/// draws are uniform.
fn avoiding_conics<R: Rng>(ctx: &Ctx, rng: &mut R) -> Vec<(BaerSubplane, FqConic)> {
    let f = ctx.f();
    // for q = 2 the two roots outside F_q are conjugate, so no such C⁺ is secant
    let types: Vec<InfinityType> = TYPES.into_iter().filter(|&t| f.q() > 2 || t != InfinityType::Secant).collect();
    (0..ctx.n.max(6))
        .map(|i| {
            let b = gen::tangent_subplane(f, rng);
            let c = if i % 2 == 0 {
                gen::fq_conic_avoiding_t(f, rng, &b)
            } else {
                gen::fq_conic_avoiding_t_of_type(f, rng, &b, types[(i / 2) % types.len()])
            };
            (b, c)
        })
        .collect()
}

fn type_key(t: InfinityType) -> &'static str {
    match t {
        InfinityType::Tangent => "case_tangent",
        InfinityType::Secant => "case_secant",
        InfinityType::Exterior => "case_exterior",
    }
}

fn smiley_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for (b, c) in avoiding_conics(ctx, &mut rng) {
        let kind = c.cplus().infinity_type(f);
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let class = specialness(frame, &curve).class;
        ev.bump(type_key(kind));
        if !ev.require(curve.degree() == 4 && class == expected_class(kind), "[C] is a g-special or g★-special NRC4", || {
            json!({ "subplane_frame": mat(b.frame()), "conic_param": param_json(&c), "class": format!("{class:?}") })
        }) {
            break;
        }
    }
    Ok(ev)
}

pub fn smiley_conic(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 7, smiley_run)
}

fn baby_not_t_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for (b, c) in avoiding_conics(ctx, &mut rng) {
        let kind = c.cplus().infinity_type(f);
        let curve = RationalCurve::bb_image_of_fq_conic(f, &c)?;
        let spec = specialness(frame, &curve);
        let on_g: Vec<(&Point, usize)> = spec.witnesses.iter().filter(|w| w.line == Transversal::G).map(|w| (&w.point, w.multiplicity)).collect();
        ev.bump(type_key(kind));
        let ok = match kind {
            InfinityType::Tangent => {
                let d = c.cplus().ell_inf_roots(f, Level::Quadratic)[0];
                on_g == vec![(&frame.g_point(d), 2)]
            }
            InfinityType::Secant => {
                let mut expect: Vec<Point> = c.cplus().ell_inf_roots(f, Level::Quadratic).into_iter().map(|d| frame.g_point(d)).collect();
                expect.sort();
                on_g.iter().map(|(p, _)| (*p).clone()).collect::<Vec<_>>() == expect && on_g.iter().all(|&(_, m)| m == 1)
            }
            InfinityType::Exterior => {
                let mut expect: Vec<Point> = c.cplus().ell_inf_roots(f, Level::Quartic).into_iter().map(|d| frame.g_point(d)).collect();
                expect.sort();
                expect.dedup();
                spec.class == SpecialClass::GStarSpecialNrc4 && on_g.iter().map(|(p, _)| (*p).clone()).collect::<Vec<_>>() == expect
            }
        };
        if !ev.require(ok, "[C] meets g (or g★) exactly at the points of C⁺ ∩ ℓ∞", || {
            json!({ "subplane_frame": mat(b.frame()), "conic_param": param_json(&c), "type": type_key(kind), "on_g": pts(on_g.iter().map(|(p, _)| *p)) })
        }) {
            break;
        }
        ev.example(|| json!({ "type": type_key(kind), "on_g": pts(on_g.iter().map(|(p, _)| *p)) }));
    }
    Ok(ev)
}

pub fn baby_not_t(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 7, baby_not_t_run)
}

fn nrc_is_baby_run(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for i in 0..ctx.n.max(3) {
        let (target, expect, level, key) = match i % 3 {
            0 => {
                let (a, b) = loop {
                    let (a, b) = (random_param(f, &mut rng), random_param(f, &mut rng));
                    if a != b {
                        break (a, b);
                    }
                };
                (SpecialTarget::Nrc4Secant { alpha: a, beta: b }, vec![a, b], Level::Quadratic, "case_secant")
            }
            1 => {
                let a = random_param(f, &mut rng);
                (SpecialTarget::Nrc4Tangent { alpha: a }, vec![a], Level::Quadratic, "case_tangent")
            }
            _ => {
                let a = gen::outside(f, &mut rng, Level::Quartic, Level::Quadratic);
                (SpecialTarget::Nrc4Exterior { alpha: a }, vec![Some(a), Some(f.frobenius(a, 2))], Level::Quartic, "case_exterior")
            }
        };
        let curve = synthesize(frame, target, &mut rng)?;
        ev.bump(key);
        let ok = check_recovery(frame, &curve, false, &expect, level)?;
        if !ev.require(ok, "a special NRC4 is [C] for an F_q-conic C of a tangent B avoiding T̄", || {
            json!({ "curve": mat(curve.matrix()), "prescribed": expect.iter().map(|&d| param(d)).collect::<Vec<_>>() })
        }) {
            break;
        }
    }
    Ok(ev)
}

pub fn nrc_is_baby(ctx: &Ctx) -> Result<Evidence> {
    gated(ctx, 7, nrc_is_baby_run)
}

