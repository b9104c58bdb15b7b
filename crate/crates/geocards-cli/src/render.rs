//! Plain-text rendering for terminal output (the `table` format).

use geocards::params::SizeRecord;
use geocards::protocol::{format_hand, Deal, EnumeratedAnnouncement, Transcript};
use geocards::verifier::Violation;
use geocards::ProtocolParams;

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn holds(flag: bool) -> &'static str {
    if flag {
        "holds"
    } else {
        "fails"
    }
}

/// `sizes (8, 6, 2) over GF(4)^2`
pub fn sizes_line(p: &ProtocolParams) -> String {
    format!(
        "sizes ({}, {}, {}) over GF({})^{}",
        p.a(),
        p.b(),
        p.c(),
        p.q(),
        p.d() + 1
    )
}

pub fn record_table(r: &SizeRecord) -> String {
    let p = &r.params;
    format!(
        "{}: q = {}, d = {}, k = {}, deck of {} cards\n\
         gap condition    c < k*q^d - k^2*q^(d-1): {}\n\
         field condition  max{{c+k, c*k}} <= q:      {}\n\
         theorem applies: {}\n",
        sizes_line(p),
        p.q(),
        p.d(),
        p.k(),
        p.deck_size(),
        holds(r.gap_condition),
        holds(r.field_condition),
        yes_no(r.theorem_applies()),
    )
}

pub fn records_table(records: &[SizeRecord]) -> String {
    let mut out = String::from("    a     b     c    q  d  k   deck  gap  field  theorem\n");
    for r in records {
        let p = &r.params;
        out += &format!(
            "{:5} {:5} {:5} {:4} {:2} {:2} {:6}  {:<3}  {:<5}  {}\n",
            p.a(),
            p.b(),
            p.c(),
            p.q(),
            p.d(),
            p.k(),
            p.deck_size(),
            yes_no(r.gap_condition),
            yes_no(r.field_condition),
            yes_no(r.theorem_applies()),
        );
    }
    out += &format!("{} size tuples\n", records.len());
    out
}

fn flag_lines(level: u64, informative: &Option<Violation>, k_safe: &Option<Violation>) -> String {
    let mut out = String::new();
    match informative {
        None => out += "informative: yes\n",
        Some(v) => out += &format!("informative: no\n  violation: {v}\n"),
    }
    match k_safe {
        None => out += &format!("{level}-safe: yes\n"),
        Some(v) => out += &format!("{level}-safe: no\n  violation: {v}\n"),
    }
    out
}

pub fn report_table(
    p: &ProtocolParams,
    hand_count: usize,
    level: u64,
    informative: &Option<Violation>,
    k_safe: &Option<Violation>,
) -> String {
    format!(
        "{}: {} announced hands, safety level {}\n{}",
        sizes_line(p),
        hand_count,
        level,
        flag_lines(level, informative, k_safe)
    )
}

pub fn deal_table(p: &ProtocolParams, deal: &Deal, seed: Option<u64>) -> String {
    let mut out = sizes_line(p);
    if let Some(seed) = seed {
        out += &format!(", seed {seed}");
    }
    out.push('\n');
    out += &format!("first player   {}\n", format_hand(deal.alice()));
    out += &format!("second player  {}\n", format_hand(deal.bob()));
    out += &format!("eavesdropper   {}\n", format_hand(deal.cath()));
    out
}

pub fn announcement_table(ann: &EnumeratedAnnouncement) -> String {
    let mut out = format!(
        "{}: {} announced hands\n",
        sizes_line(ann.params()),
        ann.hand_count()
    );
    for hand in ann.hands() {
        out += &format_hand(hand);
        out.push('\n');
    }
    out
}

pub fn transcript_table(
    deal: &Deal,
    t: &Transcript,
    level: u64,
    informative: &Option<Violation>,
    k_safe: &Option<Violation>,
) -> String {
    let mut out = format!("{}\n", sizes_line(&t.params));
    out += &deal_table(&t.params, deal, None)
        .lines()
        .skip(1) // the sizes line is already printed
        .map(|l| format!("{l}\n"))
        .collect::<String>();
    out += &format!("announcement: {} hands\n", t.announcement.hand_count());
    let correct = if &t.resolved_hand == deal.alice() {
        " (matches the dealt hand)"
    } else {
        " (MISMATCH)"
    };
    out += &format!("resolved hand        {}{correct}\n", format_hand(&t.resolved_hand));
    out += &format!(
        "second announcement  {}\n",
        format_hand(&t.second_announcement)
    );
    out += &format!("eavesdropper candidates: {}\n", t.cath_candidate_count);
    out += &flag_lines(level, informative, k_safe);
    out
}
