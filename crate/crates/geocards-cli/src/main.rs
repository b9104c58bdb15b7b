//! Command-line front end: deal, announce, resolve, verify, and size search.
//!
//! Exit codes: 0 on success, 1 when a check finds a violation (or a
//! resolution is ambiguous), 2 on usage or data errors, 3 when an operation
//! refuses to run because it would exceed a size budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use geocards::params::{check_conditions, derive_params, enumerate_sizes, SizeRecord};
use geocards::protocol::{
    bob_resolve, choose_announcement, enumerate_announcement_with_budget, format_hand,
    run_exchange_with_budget, Deal, DEFAULT_MAX_HANDS,
};
use geocards::verifier::{check_informative, check_k_safe, check_protocol_with_budget, Violation};
use geocards::{Card, Hand, ProtocolParams};

use geocards_cli::files::{
    to_canonical_json, AnnouncementFile, DealFile, ParamsDoc, ReportDoc, ResolutionDoc,
    SizeRecordDoc, TranscriptFile, VerificationDoc,
};
use geocards_cli::render;

#[derive(Parser)]
#[command(
    name = "geocards",
    version,
    about = "Card-deal announcements from finite geometry: deal, announce, resolve, verify"
)]
struct Cli {
    /// Output style for terminal results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Refuse to enumerate announcements with more hands than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_HANDS)]
    max_hands: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Size arithmetic: derive, list, or check parameter tuples.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Deal the deck into three hands at random.
    Deal(DealArgs),
    /// Pick the first player's announcement for a dealt hand.
    Announce(AnnounceArgs),
    /// Resolve the first player's hand from an announcement.
    Resolve(ResolveArgs),
    /// Exhaustively check announcements for informativity and safety.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run one full exchange end to end and verify it.
    Demo(DemoArgs),
}

/// The geometric inputs every size tuple derives from.
#[derive(Args)]
struct GeometryArgs {
    /// Field order; must be a prime power.
    #[arg(long)]
    q: u64,
    /// Dimension parameter; the deck has q^(d+1) cards.
    #[arg(long)]
    d: u32,
    /// Number of parallel hyperplanes in an announced hand.
    #[arg(long)]
    k: u64,
    /// Eavesdropper hand size.
    #[arg(long)]
    c: u64,
}

impl GeometryArgs {
    fn params(&self) -> geocards::Result<ProtocolParams> {
        ProtocolParams::from_geometry(self.q, self.d, self.k, self.c)
    }
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// Find the smallest workable field order for a slice count and
    /// eavesdropper hand size.
    Derive {
        /// Number of parallel hyperplanes in an announced hand.
        #[arg(long)]
        k: u64,
        /// Eavesdropper hand size.
        #[arg(long)]
        c: u64,
        /// Dimension parameter; the deck has q^(d+1) cards.
        #[arg(long)]
        d: u32,
    },
    /// Tabulate every size tuple up to a deck limit, with condition flags.
    List {
        /// Largest deck size to include.
        #[arg(long)]
        max_deck: u64,
    },
    /// Evaluate both sufficient conditions for one size tuple.
    Check {
        #[command(flatten)]
        geometry: GeometryArgs,
    },
}

#[derive(Args)]
struct DealArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    /// Seed for the shuffle; identical seeds give identical deals.
    #[arg(long)]
    seed: u64,
    /// Write the deal document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnnounceArgs {
    /// Deal document to announce from.
    #[arg(long)]
    deal: PathBuf,
    /// Seed for the uniform choice among announcements containing the hand.
    #[arg(long)]
    seed: u64,
    /// Write the announcement document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(
    ArgGroup::new("second_player")
        .required(true)
        .args(["bob", "deal"]),
))]
struct ResolveArgs {
    /// Announcement (or transcript) document to resolve against.
    #[arg(long)]
    announcement: PathBuf,
    /// The second player's cards, comma-separated (e.g. 9,10,11,12,13,14).
    #[arg(long)]
    bob: Option<String>,
    /// Read the second player's cards from a deal document instead.
    #[arg(long)]
    deal: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check an announcement (or transcript) document.
    Announcement {
        /// Document to check.
        #[arg(long)]
        announcement: PathBuf,
        /// Safety level to check; defaults to the transcript's embedded
        /// level, or to the tuple's own k.
        #[arg(long)]
        k_safety: Option<u64>,
    },
    /// Check a whole size tuple via the identity card map, which settles
    /// every card map by relabeling symmetry.
    Protocol {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Safety level to check; defaults to the tuple's own k.
        #[arg(long)]
        k_safety: Option<u64>,
    },
}

#[derive(Args)]
struct DemoArgs {
    /// First player's hand size; must equal k*q^d.
    #[arg(long)]
    a: u64,
    /// Second player's hand size.
    #[arg(long)]
    b: u64,
    /// Eavesdropper hand size.
    #[arg(long)]
    c: u64,
    /// Field order; must be a prime power.
    #[arg(long)]
    q: u64,
    /// Dimension parameter; the deck has q^(d+1) cards.
    #[arg(long)]
    d: u32,
    /// Number of parallel hyperplanes in an announced hand.
    #[arg(long)]
    k: u64,
    /// Seed driving both the deal and the announcement choice.
    #[arg(long)]
    seed: u64,
    /// Safety level to verify; defaults to k.
    #[arg(long)]
    k_safety: Option<u64>,
    /// Write the transcript document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<geocards::Error>() {
                Some(geocards::Error::SizeGuard { .. }) => ExitCode::from(3),
                Some(geocards::Error::Ambiguous { .. }) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Params(cmd) => run_params(cli, cmd),
        Command::Deal(args) => run_deal(cli, args),
        Command::Announce(args) => run_announce(cli, args),
        Command::Resolve(args) => run_resolve(cli, args),
        Command::Verify(cmd) => run_verify(cli, cmd),
        Command::Demo(args) => run_demo(cli, args),
    }
}

fn run_params(cli: &Cli, cmd: &ParamsCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        ParamsCmd::Derive { k, c, d } => emit_record(cli, &derive_params(*k, *c, *d)?),
        ParamsCmd::Check { geometry } => emit_record(cli, &check_conditions(&geometry.params()?)),
        ParamsCmd::List { max_deck } => {
            let records = enumerate_sizes(*max_deck);
            match cli.format {
                Format::Json => {
                    let docs: Vec<SizeRecordDoc> =
                        records.iter().map(SizeRecordDoc::from_record).collect();
                    print!("{}", to_canonical_json(&docs));
                }
                Format::Table => print!("{}", render::records_table(&records)),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_record(cli: &Cli, record: &SizeRecord) -> anyhow::Result<ExitCode> {
    match cli.format {
        Format::Json => print!("{}", to_canonical_json(&SizeRecordDoc::from_record(record))),
        Format::Table => print!("{}", render::record_table(record)),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_deal(cli: &Cli, args: &DealArgs) -> anyhow::Result<ExitCode> {
    let params = args.geometry.params()?;
    let deal = Deal::random(&params, args.seed)?;
    let file = DealFile::from_deal(&params, &deal, Some(args.seed));
    emit_document(cli, &args.out, &file, || {
        render::deal_table(&params, &deal, Some(args.seed))
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run_announce(cli: &Cli, args: &AnnounceArgs) -> anyhow::Result<ExitCode> {
    let (params, deal) = read_deal(&args.deal)?;
    let implicit = choose_announcement(&params, &deal, args.seed)?;
    let ann = enumerate_announcement_with_budget(&implicit, cli.max_hands)?;
    let file = AnnouncementFile::from_announcement(&ann);
    emit_document(cli, &args.out, &file, || render::announcement_table(&ann))?;
    Ok(ExitCode::SUCCESS)
}

fn run_resolve(cli: &Cli, args: &ResolveArgs) -> anyhow::Result<ExitCode> {
    let (file, _) = read_announcement_doc(&args.announcement)?;
    let ann = file.to_announcement()?;
    let bob: Hand = match (&args.bob, &args.deal) {
        (Some(list), None) => parse_card_list(list)?,
        (None, Some(path)) => {
            let (deal_params, deal) = read_deal(path)?;
            if &deal_params != ann.params() {
                bail!(
                    "the deal's sizes do not match the announcement's ({} vs {})",
                    render::sizes_line(&deal_params),
                    render::sizes_line(ann.params())
                );
            }
            deal.bob().clone()
        }
        _ => unreachable!("clap enforces exactly one source for the second player's cards"),
    };
    let resolved = bob_resolve(&ann, &bob)?;
    match cli.format {
        Format::Json => print!(
            "{}",
            to_canonical_json(&ResolutionDoc {
                resolved_hand: geocards_cli::files::hand_to_list(&resolved),
            })
        ),
        Format::Table => println!("resolved hand: {}", format_hand(&resolved)),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(cli: &Cli, cmd: &VerifyCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        VerifyCmd::Protocol { geometry, k_safety } => {
            let params = geometry.params()?;
            let level = k_safety.unwrap_or(params.k());
            let report = check_protocol_with_budget(&params, level, cli.max_hands)?;
            emit_report(
                cli,
                &params,
                report.hand_count,
                level,
                &report.informative,
                &report.k_safe,
            )
        }
        VerifyCmd::Announcement {
            announcement,
            k_safety,
        } => {
            let (file, embedded) = read_announcement_doc(announcement)?;
            let ann = file.to_announcement()?;
            let level = k_safety
                .or(embedded.map(|v| v.k_safety_level))
                .unwrap_or_else(|| ann.params().k());
            let informative = check_informative(&ann)?;
            let k_safe = check_k_safe(&ann, level)?;
            emit_report(
                cli,
                ann.params(),
                ann.hand_count(),
                level,
                &informative,
                &k_safe,
            )
        }
    }
}

fn emit_report(
    cli: &Cli,
    params: &ProtocolParams,
    hand_count: usize,
    level: u64,
    informative: &Option<Violation>,
    k_safe: &Option<Violation>,
) -> anyhow::Result<ExitCode> {
    match cli.format {
        Format::Json => {
            let doc = ReportDoc {
                hand_count: hand_count as u64,
                informative: informative.is_none(),
                informative_violation: informative.as_ref().map(Violation::to_string),
                k_safe: k_safe.is_none(),
                k_safe_violation: k_safe.as_ref().map(Violation::to_string),
                k_safety_level: level,
                params: ParamsDoc::from_params(params),
            };
            print!("{}", to_canonical_json(&doc));
        }
        Format::Table => print!(
            "{}",
            render::report_table(params, hand_count, level, informative, k_safe)
        ),
    }
    Ok(if informative.is_none() && k_safe.is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_demo(cli: &Cli, args: &DemoArgs) -> anyhow::Result<ExitCode> {
    let params = ProtocolParams::new(args.a, args.b, args.c, args.q, args.d, args.k)?;
    let deal = Deal::random(&params, args.seed)?;
    let transcript = run_exchange_with_budget(&params, &deal, args.seed, cli.max_hands)?;
    let level = args.k_safety.unwrap_or_else(|| params.k());
    let informative = check_informative(&transcript.announcement)?;
    let k_safe = check_k_safe(&transcript.announcement, level)?;
    let verification = VerificationDoc {
        informative: informative.is_none(),
        k_safe: k_safe.is_none(),
        k_safety_level: level,
    };
    let file = TranscriptFile::from_transcript(&transcript, verification);
    emit_document(cli, &args.out, &file, || {
        render::transcript_table(&deal, &transcript, level, &informative, &k_safe)
    })?;
    Ok(if verification.informative && verification.k_safe {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Writes the canonical JSON document to `--out` when given; otherwise
/// prints it (or its table rendering) to stdout.
fn emit_document<T: Serialize>(
    cli: &Cli,
    out: &Option<PathBuf>,
    doc: &T,
    table: impl FnOnce() -> String,
) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, to_canonical_json(doc))
            .with_context(|| format!("writing {}", path.display()))?,
        None => match cli.format {
            Format::Json => print!("{}", to_canonical_json(doc)),
            Format::Table => print!("{}", table()),
        },
    }
    Ok(())
}

fn read_deal(path: &Path) -> anyhow::Result<(ProtocolParams, Deal)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: DealFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.to_deal()?)
}

/// Accepts either an announcement document or a transcript document (whose
/// announcement and embedded verification flags are then used).
fn read_announcement_doc(
    path: &Path,
) -> anyhow::Result<(AnnouncementFile, Option<VerificationDoc>)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(file) = serde_json::from_str::<AnnouncementFile>(&text) {
        return Ok((file, None));
    }
    let transcript: TranscriptFile = serde_json::from_str(&text).with_context(|| {
        format!(
            "parsing {} as an announcement or transcript document",
            path.display()
        )
    })?;
    let verification = transcript.verification;
    Ok((transcript.announcement_file(), Some(verification)))
}

fn parse_card_list(text: &str) -> anyhow::Result<Hand> {
    text.split(',')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(|part| {
            part.parse::<u32>()
                .map(Card)
                .with_context(|| format!("bad card number {part:?}"))
        })
        .collect()
}
