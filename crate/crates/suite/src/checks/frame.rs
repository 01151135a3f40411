//! The field tower and the Bruck–Bose frame itself.

use bbgeom::bruckbose::{affine_plane_check, is_partition_of_sigma_inf, regularity_violation};
use bbgeom::{FElem, Level, Result, Subspace};
use rand::Rng;
use serde_json::json;

use crate::context::{el, pt, sub, Ctx, Evidence};
use crate::gen;

fn multiplicative_order(f: &bbgeom::FieldTower, x: FElem) -> u64 {
    let mut y = x;
    let mut k = 1;
    while y != FElem::ONE {
        y = f.mul(y, x);
        k += 1;
    }
    k
}

pub fn field_tower(ctx: &Ctx) -> Result<Evidence> {
    let f = ctx.f();
    let q = f.q();
    let mut ev = Evidence::default();
    let (tau, sigma) = (f.tau(), f.sigma());
    let tq = f.frobenius(tau, 1);
    ev.require(f.mul(tau, tq) == f.neg(f.t0()), "τ·τ^q = −t0", || json!({ "tau_q": el(tq) }));
    ev.require(f.add(tau, tq) == f.t1(), "τ + τ^q = t1", || json!({ "tau_q": el(tq) }));
    let sq = f.frobenius(sigma, 2);
    ev.require(f.mul(sigma, sq) == f.neg(f.s0()), "σ·σ^{q²} = −s0", || json!({ "sigma_q2": el(sq) }));
    ev.require(f.add(sigma, sq) == f.s1(), "σ + σ^{q²} = s1", || json!({ "sigma_q2": el(sq) }));
    let q2 = (q as u64).pow(2);
    ev.require(multiplicative_order(f, tau) == q2 - 1, "τ is primitive in F_q²", || json!({ "tau": el(tau) }));
    ev.require(multiplicative_order(f, sigma) == q2 * q2 - 1, "σ is primitive in F_q⁴", || json!({ "sigma": el(sigma) }));
    let mut fixed = [0u64; 3];
    for x in f.elements(Level::Quartic) {
        let ok = f.frobenius(x, 4) == x;
        if !ev.require(ok, "x^{q⁴} = x", || json!({ "x": el(x) })) {
            break;
        }
        for (k, lvl) in Level::ALL.iter().enumerate() {
            let fixed_by = f.frobenius(x, lvl.degree()) == x;
            if !ev.require(fixed_by == f.in_level(x, *lvl), "subfield is the fixed field of Frobenius", || json!({ "x": el(x) })) {
                break;
            }
            fixed[k] += fixed_by as u64;
        }
    }
    ev.set("fixed_by_frobenius", fixed[0]);
    ev.set("fixed_by_frobenius_squared", fixed[1]);
    ev.set("elements", fixed[2]);
    Ok(ev)
}

pub fn spread_partition(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let mut ev = Evidence::default();
    let spread = frame.spread();
    let q = f.q() as u64;
    ev.set("spread_lines", spread.len() as u64);
    ev.require(spread.len() as u64 == q * q + 1, "q²+1 spread lines", || json!({ "lines": spread.len() }));
    ev.require(is_partition_of_sigma_inf(frame, spread), "spread lines partition Σ∞", || json!({}));
    ev.require(frame.g().rational_part(f, Level::Base).is_empty(), "g has no rational point", || sub(&frame.g()));
    ev.require(frame.gq() == frame.g().frobenius(f, 1), "g^q is the conjugate of g", || sub(&frame.gq()));
    for d in frame.deltas() {
        let t = frame.g_point(d);
        let expect = Subspace::join_points(f, &t, &t.frobenius(f, 1));
        if !ev.require(*frame.spread_line(d) == expect, "[T]⋆ = T T^q", || json!({ "T": pt(&t) })) {
            break;
        }
    }
    if ctx.exhaustive {
        ev.set("regularity_triples_checked", (spread.len() * (spread.len() - 1) * (spread.len() - 2) / 6) as u64);
        let v = regularity_violation(f, spread);
        ev.require(v.is_none(), "regulus of any three spread lines lies in the spread", || json!({ "triple": v }));
    } else {
        let mut rng = ctx.rng();
        let n = spread.len();
        for _ in 0..ctx.n {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j || j == k || i == k {
                continue;
            }
            let r = bbgeom::regulus::Regulus::through(f, [&spread[i], &spread[j], &spread[k]], Level::Base)?;
            ev.bump("regularity_triples_checked");
            if !ev.require(r.lines().iter().all(|l| spread.contains(l)), "regulus of three spread lines lies in the spread", || json!({ "triple": [i, j, k] })) {
                break;
            }
        }
    }
    Ok(ev)
}

pub fn spread_constructions(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let mut ev = Evidence::default();
    for d in frame.deltas() {
        let other = frame.spread_line_from_transversal(d);
        ev.bump("lines_compared");
        if !ev.require(&other == frame.spread_line(d), "coordinate and transversal constructions agree", || {
            json!({ "delta": crate::context::param(d), "coordinate": sub(frame.spread_line(d)), "transversal": sub(&other) })
        }) {
            break;
        }
    }
    Ok(ev)
}

pub fn bb_plane_axioms(ctx: &Ctx) -> Result<Evidence> {
    let frame = ctx.frame;
    let f = ctx.f();
    let q = f.q();
    let mut ev = Evidence::default();
    if ctx.exhaustive {
        let check = affine_plane_check(frame, frame.spread());
        ev.set("points", check.points as u64);
        ev.set("lines", check.lines as u64);
        ev.require(check.line_size_ok, "every line has q² points", || json!({}));
        if let Some((a, b, n)) = &check.violation {
            ev.require(false, "two affine points lie on exactly one line", || json!({ "a": pt(a), "b": pt(b), "lines": n }));
        }
        ev.require(check.passed(q), "q⁴ points and q⁴+q² lines", || json!({ "points": check.points, "lines": check.lines }));
        return Ok(ev);
    }
    let mut rng = ctx.rng();
    for _ in 0..ctx.n {
        let a = frame.bb_map(&gen::point_affine(f, &mut rng))?;
        let b = frame.bb_map(&gen::point_affine(f, &mut rng))?;
        if a == b {
            continue;
        }
        ev.bump("pairs");
        let through: Vec<Subspace> = frame
            .spread()
            .iter()
            .map(|l| l.join(f, &Subspace::from_point(&a)))
            .filter(|plane| plane.contains_point(f, &b))
            .collect();
        if !ev.require(through.len() == 1, "two affine points lie on exactly one line", || {
            json!({ "a": pt(&a), "b": pt(&b), "lines": through.len() })
        }) {
            break;
        }
        // the plane is the image of the line of PG(2,q²) through the preimages
        let (ua, ub) = (frame.bb_unmap(&a)?, frame.bb_unmap(&b)?);
        let line = Subspace::join_points(f, &ua, &ub);
        let image_ok = line
            .points(f, Level::Quadratic)
            .iter()
            .filter(|p| !p.coords()[2].is_zero())
            .all(|p| through[0].contains_point(f, &frame.bb_map(p).unwrap()));
        ev.require(image_ok, "the plane is the image of a line of PG(2,q²)", || json!({ "a": pt(&a), "b": pt(&b) }));
    }
    Ok(ev)
}
