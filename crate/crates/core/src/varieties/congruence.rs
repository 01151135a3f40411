//! Lines of the hyperbolic congruence of `g, g^q`, conics special with
//! respect to such a line pair, and the circle partition of the spread.

use serde::Serialize;

use super::curve::{meet_parameters, RationalCurve};
use crate::bruckbose::{is_partition_of_sigma_inf, regularity_violation, BruckBoseFrame};
use crate::error::{Error, Result};
use crate::gf::{FElem, Level};
use crate::projective::Subspace;
use crate::regulus::Regulus;

/// The line `PQ^q` of `PG(4,q²)`, for `P, Q` on `g` with parameters
/// `p, q` (the `δ` of `P̄, Q̄`).
pub fn congruence_line(frame: &BruckBoseFrame, p: Option<FElem>, q: Option<FElem>) -> Subspace {
    let f = frame.tower();
    let a = frame.g_point(p);
    let b = frame.g_point(q).frobenius(f, 1);
    Subspace::join_points(f, &a, &b)
}

/// Whether the ⋆-extension of the conic meets both `PQ^q` and `P^qQ`.
pub fn special_conic_wrt(frame: &BruckBoseFrame, pair: (Option<FElem>, Option<FElem>), conic: &RationalCurve) -> Result<bool> {
    if conic.degree() != 2 || conic.space_dim() != 4 {
        return Err(Error::InvalidInput("expected a conic of PG(4,q)".into()));
    }
    let f = frame.tower();
    let (p, q) = pair;
    Ok([congruence_line(frame, p, q), congruence_line(frame, q, p)]
        .iter()
        .all(|line| !meet_parameters(f, conic, line, Level::Quadratic).is_empty()))
}

/// The `q−1` reguli of the spread lines other than `[P], [Q]`, one per
/// circle `{x : x^{q+1} = c}` in the coordinate with `P̄ = 0`, `Q̄ = ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirclePartition {
    pub p: Option<FElem>,
    pub q: Option<FElem>,
    pub reguli: Vec<Regulus>,
}

impl CirclePartition {
    pub fn new(frame: &BruckBoseFrame, p: Option<FElem>, q: Option<FElem>) -> Result<CirclePartition> {
        let f = frame.tower();
        if p == q {
            return Err(Error::InvalidInput("P̄ and Q̄ must differ".into()));
        }
        let coord = |d: Option<FElem>| -> Option<FElem> {
            // x = (δ − p)/(δ − q), read projectively when p or q is ∞
            if d == q {
                return None;
            }
            if d == p {
                return Some(FElem::ZERO);
            }
            Some(match (d, p, q) {
                (None, Some(_), Some(_)) => FElem::ONE,
                (Some(x), None, Some(b)) => f.inv(f.sub(x, b)).unwrap(),
                (Some(x), Some(a), None) => f.sub(x, a),
                (Some(x), Some(a), Some(b)) => f.div(f.sub(x, a), f.sub(x, b)),
                _ => unreachable!("∞ coincides with p or q"),
            })
        };
        let qq = f.q() as u64;
        let mut classes: Vec<(FElem, Vec<Option<FElem>>)> = Vec::new();
        for d in frame.deltas() {
            let Some(x) = coord(d) else { continue };
            if x.is_zero() {
                continue;
            }
            let c = f.pow(x, qq + 1);
            match classes.iter_mut().find(|(k, _)| *k == c) {
                Some((_, v)) => v.push(d),
                None => classes.push((c, vec![d])),
            }
        }
        let mut reguli = Vec::new();
        for (_, ds) in &classes {
            let lines: Vec<&Subspace> = ds.iter().map(|&d| frame.spread_line(d)).collect();
            let r = Regulus::through(f, [lines[0], lines[1], lines[2]], Level::Base)?;
            if r.lines().len() != ds.len() || lines.iter().any(|l| !r.contains_line(l)) {
                return Err(Error::Degenerate("circle does not give a regulus of the spread".into()));
            }
            reguli.push(r);
        }
        reguli.sort_by(|a, b| a.lines().cmp(b.lines()));
        Ok(CirclePartition { p, q, reguli })
    }

    /// `[P]`, `[Q]` and the opposite of each regulus.
    pub fn switched_spread(&self, frame: &BruckBoseFrame) -> Vec<Subspace> {
        let f = frame.tower();
        let mut out = vec![frame.spread_line(self.p).clone(), frame.spread_line(self.q).clone()];
        for r in &self.reguli {
            out.extend(r.opposite(f).lines().iter().cloned());
        }
        out
    }

    /// Whether the switched spread is a regular spread whose lines all meet
    /// `PQ^q` and `P^qQ`.
    pub fn switched_is_regular_with_transversals(&self, frame: &BruckBoseFrame) -> bool {
        let f = frame.tower();
        let spread = self.switched_spread(frame);
        let t1 = congruence_line(frame, self.p, self.q);
        let t2 = congruence_line(frame, self.q, self.p);
        is_partition_of_sigma_inf(frame, &spread)
            && regularity_violation(f, &spread).is_none()
            && spread.iter().all(|l| !l.meet(f, &t1).is_empty() && !l.meet(f, &t2).is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn circle_partition_at_q3() {
        let f = FieldTower::new(3).unwrap();
        let frame = BruckBoseFrame::new(f.clone());
        for (p, q) in [(Some(FElem::ZERO), None), (Some(f.tau()), Some(FElem::ONE)), (None, Some(f.tau()))] {
            let cp = CirclePartition::new(&frame, p, q).unwrap();
            assert_eq!(cp.reguli.len(), 2);
            assert!(cp.reguli.iter().all(|r| r.lines().len() == 4));
            assert!(cp.switched_is_regular_with_transversals(&frame));
        }
    }
}
