//! The JSON documents the command line reads and writes.
//!
//! Every document is UTF-8 JSON with object keys in a fixed (alphabetical)
//! order and card lists sorted ascending, so parsing a canonical document
//! and re-emitting it reproduces the input byte for byte.
//! [`to_canonical_json`] is the single emission path.

use serde::{Deserialize, Serialize};

use geocards::protocol::{Deal, EnumeratedAnnouncement, Transcript};
use geocards::{Card, Hand, ProtocolParams, Result};

/// The six validated sizes, spelled out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u32,
    pub k: u64,
    pub q: u64,
}

impl ParamsDoc {
    pub fn from_params(p: &ProtocolParams) -> Self {
        ParamsDoc {
            a: p.a(),
            b: p.b(),
            c: p.c(),
            d: p.d(),
            k: p.k(),
            q: p.q(),
        }
    }

    /// Re-validates the tuple, so a hand-edited document cannot smuggle in
    /// inconsistent sizes.
    pub fn to_params(&self) -> Result<ProtocolParams> {
        ProtocolParams::new(self.a, self.b, self.c, self.q, self.d, self.k)
    }
}

pub fn hand_to_list(hand: &Hand) -> Vec<u32> {
    hand.iter().map(|card| card.0).collect()
}

pub fn list_to_hand(cards: &[u32]) -> Hand {
    cards.iter().copied().map(Card).collect()
}

/// The three players' cards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandsDoc {
    pub alice: Vec<u32>,
    pub bob: Vec<u32>,
    pub cath: Vec<u32>,
}

/// One dealt game: who holds what, under which sizes, from which seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DealFile {
    pub hands: HandsDoc,
    pub params: ParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DealFile {
    pub fn from_deal(params: &ProtocolParams, deal: &Deal, seed: Option<u64>) -> Self {
        DealFile {
            hands: HandsDoc {
                alice: hand_to_list(deal.alice()),
                bob: hand_to_list(deal.bob()),
                cath: hand_to_list(deal.cath()),
            },
            params: ParamsDoc::from_params(params),
            seed,
        }
    }

    /// Validates the sizes and that the hands partition the deck.
    pub fn to_deal(&self) -> Result<(ProtocolParams, Deal)> {
        let params = self.params.to_params()?;
        let deal = Deal::new(
            list_to_hand(&self.hands.alice),
            list_to_hand(&self.hands.bob),
            list_to_hand(&self.hands.cath),
            &params,
        )?;
        Ok((params, deal))
    }
}

/// An announcement listed out hand by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnouncementFile {
    pub hands: Vec<Vec<u32>>,
    pub params: ParamsDoc,
}

impl AnnouncementFile {
    pub fn from_announcement(ann: &EnumeratedAnnouncement) -> Self {
        AnnouncementFile {
            hands: ann.hands().iter().map(hand_to_list).collect(),
            params: ParamsDoc::from_params(ann.params()),
        }
    }

    /// Validates sizes and card ranges; hands are re-sorted and deduplicated,
    /// so canonical re-emission canonicalizes hand-written documents too.
    pub fn to_announcement(&self) -> Result<EnumeratedAnnouncement> {
        let params = self.params.to_params()?;
        let hands = self.hands.iter().map(|h| list_to_hand(h)).collect();
        EnumeratedAnnouncement::from_hands(params, hands)
    }
}

/// The verification flags embedded in a transcript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationDoc {
    pub informative: bool,
    pub k_safe: bool,
    pub k_safety_level: u64,
}

/// A full exchange: the announcement, both replies, what the eavesdropper
/// is left with, and the verification verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptFile {
    pub announcement: Vec<Vec<u32>>,
    pub bob_resolution: Vec<u32>,
    pub bob_second_announcement: Vec<u32>,
    pub cath_candidate_count: u64,
    pub params: ParamsDoc,
    pub verification: VerificationDoc,
}

impl TranscriptFile {
    pub fn from_transcript(t: &Transcript, verification: VerificationDoc) -> Self {
        TranscriptFile {
            announcement: t.announcement.hands().iter().map(hand_to_list).collect(),
            bob_resolution: hand_to_list(&t.resolved_hand),
            bob_second_announcement: hand_to_list(&t.second_announcement),
            cath_candidate_count: t.cath_candidate_count as u64,
            params: ParamsDoc::from_params(&t.params),
            verification,
        }
    }

    /// The announcement part alone, e.g. for re-verification.
    pub fn announcement_file(&self) -> AnnouncementFile {
        AnnouncementFile {
            hands: self.announcement.clone(),
            params: self.params,
        }
    }
}

/// One row of the size table, with both condition flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeRecordDoc {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u32,
    pub field_condition: bool,
    pub gap_condition: bool,
    pub k: u64,
    pub q: u64,
    pub theorem_applies: bool,
}

impl SizeRecordDoc {
    pub fn from_record(r: &geocards::SizeRecord) -> Self {
        let p = &r.params;
        SizeRecordDoc {
            a: p.a(),
            b: p.b(),
            c: p.c(),
            d: p.d(),
            field_condition: r.field_condition,
            gap_condition: r.gap_condition,
            k: p.k(),
            q: p.q(),
            theorem_applies: r.theorem_applies(),
        }
    }
}

/// The outcome of `verify`, in document form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub hand_count: u64,
    pub informative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub informative_violation: Option<String>,
    pub k_safe: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_safe_violation: Option<String>,
    pub k_safety_level: u64,
    pub params: ParamsDoc,
}

/// The outcome of `resolve`, in document form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDoc {
    pub resolved_hand: Vec<u32>,
}

/// The one emission path: pretty JSON, keys in declaration (alphabetical)
/// order, trailing newline.
pub fn to_canonical_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}
