//! The ordered list of checkers.

use bbgeom::Result;

use crate::checks::{adult, baby, baer, frame, partition, ruled, spread};
use crate::context::{Ctx, Evidence};

/// What a checker can enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// A fixed finite computation; sampling parameters are ignored.
    Fixed,
    /// Exhaustive for `q ≤ max_q`, sampled above.
    Exhaustive { max_q: u32 },
    /// Sampled only.
    Sampled,
}

pub(crate) struct Checker {
    pub id: &'static str,
    pub scope: Scope,
    pub run: fn(&Ctx) -> Result<Evidence>,
}

const fn c(id: &'static str, scope: Scope, run: fn(&Ctx) -> Result<Evidence>) -> Checker {
    Checker { id, scope, run }
}

use Scope::{Exhaustive as E, Fixed, Sampled};

static CHECKERS: &[Checker] = &[
    c("field-tower", Fixed, frame::field_tower),
    c("spread-partition", E { max_q: 7 }, frame::spread_partition),
    c("spread-constructions", Fixed, frame::spread_constructions),
    c("bb-plane-axioms", E { max_q: 5 }, frame::bb_plane_axioms),
    c("BB-Baer-1", E { max_q: 5 }, baer::bb_baer_1),
    c("BB-Baer-2", E { max_q: 3 }, baer::bb_baer_2),
    c("BB-Baer-3", Sampled, baer::bb_baer_3),
    c("BB-Baer-4", Sampled, baer::bb_baer_4),
    c("BB-Baer-5", Sampled, baer::bb_baer_5),
    c("lemma-3-Baer", E { max_q: 4 }, baer::lemma_3_baer),
    c("thm:partition-intro", Sampled, partition::partition_intro),
    c("cor:tgt-baby", E { max_q: 5 }, partition::tgt_baby),
    c("thm:partition", Sampled, partition::partition),
    c("sec3-regulus-special", E { max_q: 5 }, spread::sec3_regulus_special),
    c("thm:Baerline-trans", E { max_q: 5 }, spread::baerline_trans),
    c("cor:Baerplane-trans", E { max_q: 5 }, spread::baerplane_trans),
    c("part-sec-conic", Sampled, spread::part_sec_conic),
    c("res:circle", E { max_q: 3 }, spread::res_circle),
    c("adult-conic-g", Sampled, adult::adult_conic_g),
    c("cor:PcorrPsigma", Sampled, adult::p_corr_p_sigma),
    c("thm:Ccapsi", Sampled, adult::c_cap_psi),
    c("adult-conic-T", Sampled, adult::adult_conic_t),
    c("adult-baby", E { max_q: 5 }, adult::adult_baby),
    c("lem:sect-conic", Sampled, baby::sect_conic),
    c("lem:sect-conic-converse", Sampled, baby::sect_conic_converse),
    c("cath-conic", Sampled, baby::cath_conic),
    c("thm-tgt-conic-T-1", Sampled, baby::tgt_conic_t1),
    c("conv-tgt", Sampled, baby::conv_tgt),
    c("thm-tgt-conic-T-2", Sampled, baby::tgt_conic_t2),
    c("smiley-conic", Sampled, baby::smiley_conic),
    c("4nrc-is-baby-1", Sampled, baby::nrc_is_baby),
    c("baby-not-T-part2", Sampled, baby::baby_not_t),
    c("3-space-meets-ruled", E { max_q: 7 }, ruled::meets_ruled),
    c("lem:tc-brs", E { max_q: 7 }, ruled::tc_brs),
    c("lem:nrc-extn", Sampled, ruled::nrc_extn),
    c("lem:nrc-extn-tight", Fixed, ruled::nrc_extn_tight),
    c("ruled-extension-agreement", E { max_q: 4 }, ruled::extension_agreement),
];

pub(crate) fn find(id: &str) -> Option<&'static Checker> {
    CHECKERS.iter().find(|c| c.id == id)
}

/// Checker ids in suite order.
pub fn checker_ids() -> Vec<&'static str> {
    CHECKERS.iter().map(|c| c.id).collect()
}
