//! Conics of `PG(2,q²)` as pencils of quadrics in `PG(4,q)`.

use std::collections::BTreeMap;

use bbgeom::varieties::{conic_to_pencil, locus_at_infinity, pencil_member_on_g, ConicPG2, FqConic, InfinityType};
use bbgeom::{BruckBoseFrame, Level, Point, Result, Subspace};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::context::{pt, pts, sub, Ctx, Evidence};
use crate::gen;

const TYPES: [InfinityType; 3] = [InfinityType::Secant, InfinityType::Tangent, InfinityType::Exterior];

fn type_key(t: InfinityType) -> &'static str {
    match t {
        InfinityType::Secant => "secant",
        InfinityType::Tangent => "tangent",
        InfinityType::Exterior => "exterior",
    }
}

/// `n` conics covering every type: even draws are uniform, odd draws are
/// forced to cycle through the three types.
fn sample_conics<R: Rng>(ctx: &Ctx, rng: &mut R) -> Vec<ConicPG2> {
    let f = ctx.f();
    (0..ctx.n.max(3))
        .map(|i| if i % 2 == 0 { gen::conic(f, rng) } else { gen::conic_of_type(f, rng, TYPES[(i / 2) % 3]) })
        .collect()
}

fn coeffs(o: &ConicPG2) -> Value {
    json!(o.coeffs().iter().map(|x| x.0).collect::<Vec<_>>())
}

fn g_points(frame: &BruckBoseFrame, o: &ConicPG2, level: Level) -> Vec<Point> {
    let mut v: Vec<Point> = o.ell_inf_roots(frame.tower(), level).into_iter().map(|d| frame.g_point(d)).collect();
    v.sort();
    v.dedup();
    v
}

fn members_meet_g(ctx: &Ctx, level: Level, what: &str) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for o in sample_conics(ctx, &mut rng) {
        let pencil = conic_to_pencil(frame, &o)?;
        let expect = g_points(frame, &o, level);
        ev.bump(type_key(o.infinity_type(f)));
        for t in f.elements(Level::Base).map(Some).chain([None]) {
            let got = pencil_member_on_g(frame, &pencil, t, level)?;
            ev.bump("pencil_members");
            if !ev.require(got == expect, what, || json!({ "conic": coeffs(&o), "t": crate::context::param(t), "found": pts(&got), "expected": pts(&expect) })) {
                return Ok(ev);
            }
        }
        ev.example(|| json!({ "conic": coeffs(&o), "g_points": pts(&expect) }));
    }
    Ok(ev)
}

pub fn adult_conic_g(ctx: &Ctx) -> Result<Evidence> {
    members_meet_g(ctx, Level::Quadratic, "every Q_t meets g exactly in the points of O ∩ ℓ∞")
}

pub fn p_corr_p_sigma(ctx: &Ctx) -> Result<Evidence> {
    members_meet_g(ctx, Level::Quartic, "every Q_t★ meets g★ exactly in the points of O★ ∩ ℓ∞★")
}

/// The expected lines of `[O] ∩ Σ∞` at `level`.
fn expected_locus(frame: &BruckBoseFrame, o: &ConicPG2, level: Level) -> Vec<Subspace> {
    let f = frame.tower();
    let mut out: Vec<Subspace> = match o.infinity_type(f) {
        InfinityType::Tangent => vec![frame.spread_line(o.ell_inf_roots(f, Level::Quadratic)[0]).clone()],
        InfinityType::Secant => {
            let r = o.ell_inf_roots(f, Level::Quadratic);
            let (p, q) = (r[0], r[1]);
            let mut v = vec![frame.spread_line(p).clone(), frame.spread_line(q).clone()];
            if level != Level::Base {
                let (gp, gq) = (frame.g_point(p), frame.g_point(q));
                v.push(Subspace::join_points(f, &gp, &gq.frobenius(f, 1)));
                v.push(Subspace::join_points(f, &gp.frobenius(f, 1), &gq));
            }
            v
        }
        InfinityType::Exterior if level == Level::Quartic => {
            let alpha = o.ell_inf_roots(f, Level::Quartic)[0];
            let p = frame.g_point(alpha);
            let l = Subspace::join_points(f, &p, &p.frobenius(f, 1));
            (0..4).map(|i| l.frobenius(f, i)).collect()
        }
        InfinityType::Exterior => Vec::new(),
    };
    out.sort();
    out.dedup();
    out
}

pub fn c_cap_psi(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for o in sample_conics(ctx, &mut rng) {
        let pencil = conic_to_pencil(frame, &o)?;
        let kind = type_key(o.infinity_type(f));
        ev.bump(kind);
        for level in Level::ALL {
            let got = locus_at_infinity(frame, &pencil, level)?;
            let expect = expected_locus(frame, &o, level);
            let what = format!("[O] ∩ Σ∞ for a {kind} conic at {level:?} level");
            if !ev.require(got == expect, &what, || json!({ "conic": coeffs(&o), "found": got.iter().map(sub).collect::<Vec<_>>(), "expected": expect.iter().map(sub).collect::<Vec<_>>() })) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

pub fn adult_conic_t(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    for o in sample_conics(ctx, &mut rng) {
        let pencil = conic_to_pencil(frame, &o)?;
        for d in frame.deltas() {
            if o.contains(f, &frame.ell_inf_point(d)) {
                continue;
            }
            let line = frame.spread_line(d);
            let hit = line.points(f, Level::Quadratic).into_iter().find(|x| pencil.base_locus_contains(f, x.coords()));
            ev.bump("spread_lines");
            if !ev.require(hit.is_none(), "[L]⋆ is disjoint from [O]⋆ for L̄ ∈ ℓ∞ ∖ O", || json!({ "conic": coeffs(&o), "line": sub(line), "common_point": hit.as_ref().map(pt) })) {
                return Ok(ev);
            }
        }
        for _ in 0..4 {
            let l = gen::point_affine(f, &mut rng);
            if o.contains(f, &l) {
                continue;
            }
            let img = frame.bb_map(&l)?;
            ev.bump("affine_points");
            if !ev.require(!pencil.base_locus_contains(f, img.coords()), "[L] is off [O] for affine L̄ ∉ O", || json!({ "conic": coeffs(&o), "point": pt(&l) })) {
                return Ok(ev);
            }
        }
    }
    Ok(ev)
}

fn binom3(n: u64) -> u64 {
    n * (n - 1) * (n - 2) / 6
}

pub fn adult_baby(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    let q = f.q() as u64;
    let mut rng = ctx.rng();
    let mut ev = Evidence::default();
    let rounds = if ctx.exhaustive { 1 } else { ctx.n };
    for _ in 0..rounds {
        let o = gen::conic(f, &mut rng);
        let points = o.points(f, Level::Quadratic);
        let subconic_ok = |c: &FqConic| {
            let host = c.host(f);
            c.points().len() as u64 == q + 1 && c.points().iter().all(|p| o.contains(f, p) && host.contains(p))
        };
        if ctx.exhaustive {
            let n = points.len();
            let mut hits: BTreeMap<Vec<Point>, u64> = BTreeMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let c = FqConic::through(f, &o, &points[i], &points[j], &points[k])?;
                        if !ev.require(subconic_ok(&c), "an F_q-conic of O lies on O in a Baer subplane", || json!({ "conic": coeffs(&o), "subconic": pts(c.points()) })) {
                            return Ok(ev);
                        }
                        *hits.entry(c.points().to_vec()).or_default() += 1;
                    }
                }
            }
            let triples = binom3(n as u64);
            let per = binom3(q + 1);
            ev.set("triples", triples);
            ev.set("subconics", hits.len() as u64);
            ev.set("expected", q * (q * q + 1));
            let ok = hits.len() as u64 == q * (q * q + 1) && hits.values().all(|&h| h == per) && triples == per * hits.len() as u64;
            ev.require(ok, "O has q(q²+1) F_q-conics, each triple in exactly one", || json!({ "conic": coeffs(&o), "subconics": hits.len() }));
        } else {
            let tri: Vec<&Point> = points.choose_multiple(&mut rng, 3).collect();
            let c = FqConic::through(f, &o, tri[0], tri[1], tri[2])?;
            ev.bump("triples");
            let others: Vec<&Point> = c.points().iter().filter(|p| !tri.contains(p)).collect();
            let again = FqConic::through(f, &o, tri[0], tri[1], others[0])?;
            let ok = subconic_ok(&c) && tri.iter().all(|p| c.contains(p)) && again.points() == c.points();
            if !ev.require(ok, "three points of O lie in a unique F_q-conic of O", || json!({ "conic": coeffs(&o), "triple": pts(tri.iter().copied()) })) {
                break;
            }
        }
    }
    if !ctx.exhaustive {
        ev.set("expected_subconics_by_double_count", binom3(q * q + 1) / binom3(q + 1));
    }
    Ok(ev)
}
