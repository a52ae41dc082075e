//! Command-line surface: analyze instance files, run the verification
//! suites, survey tournaments, and enumerate topologies or tournaments.
//!
//! Exit codes: 0 success, 1 instance parse error, 2 verdict mismatch
//! under `--expect` or suite failure, 3 size-guard violations.

mod instance;

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperrel_core::dynamics::{self, PropertyTag, Status, System};
use hyperrel_core::family::FamilySpec;
use hyperrel_core::natset::EventuallyPeriodicSet;
use hyperrel_core::relations::hit_set_uv;
use hyperrel_core::topology::FiniteTopology;
use hyperrel_core::verify::{run_suite, SuiteOptions};
use hyperrel_core::digraphs;

const EXIT_PARSE: u8 = 1;
const EXIT_REFUTED: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperrel", about = "Dynamical properties of binary relations on finite topological spaces", version)]
struct Cli {
    /// Worker threads (also HYPERREL_THREADS); default: all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide properties of an instance file.
    Analyze {
        path: String,
        /// Comma-separated list; defaults to the four (d-)properties
        /// matching the instance arity.
        #[arg(long, value_delimiter = ',')]
        property: Vec<PropertyTag>,
        /// Family expression, overriding the file.
        #[arg(long)]
        family: Option<String>,
        /// Replicate a single-relation instance into an N-tuple.
        #[arg(long)]
        copies: Option<usize>,
        /// Print the deduplicated realized return sets.
        #[arg(long)]
        show_s_sets: bool,
        /// Exit 2 unless every requested verdict matches.
        #[arg(long)]
        expect: Option<Expect>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on sampled topologies where enumeration is infeasible.
        #[arg(long)]
        sample_cap: Option<usize>,
    },
    /// Survey S values, exponents and connectivity over tournaments.
    Survey {
        n: usize,
        /// One row per isomorphism class instead of per labeled tournament.
        #[arg(long)]
        iso: bool,
        /// Restrict to strongly connected tournaments.
        #[arg(long)]
        strong_only: bool,
    },
    /// Print all topologies or tournaments of a given size.
    Enumerate {
        #[arg(value_enum)]
        what: Kind,
        n: usize,
        #[arg(long)]
        iso: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Topologies,
    Tournaments,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Expect {
    Yes,
    No,
    Unknown,
}

impl Expect {
    fn matches(&self, s: Status) -> bool {
        matches!(
            (self, s),
            (Expect::Yes, Status::Yes) | (Expect::No, Status::No) | (Expect::Unknown, Status::Unknown)
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("HYPERREL_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match cli.command {
        Command::Analyze { path, property, family, copies, show_s_sets, expect } => {
            cmd_analyze(&path, &property, family.as_deref(), copies, show_s_sets, expect)
        }
        Command::Verify { suite, max_n, seed, sample_cap } => {
            cmd_verify(&suite, max_n, seed, sample_cap)
        }
        Command::Survey { n, iso, strong_only } => cmd_survey(n, iso, strong_only),
        Command::Enumerate { what, n, iso } => cmd_enumerate(what, n, iso),
    }
}

fn cmd_analyze(
    path: &str,
    properties: &[PropertyTag],
    family: Option<&str>,
    copies: Option<usize>,
    show_s_sets: bool,
    expect: Option<Expect>,
) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let inst = match instance::parse_instance(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let fam = match family {
        Some(expr) => match hyperrel_core::family::parse_family(expr) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_PARSE);
            }
        },
        None => inst.family.clone().unwrap_or_else(FamilySpec::all_nonempty),
    };
    let n = inst.n;
    let mut relations = inst.relations.clone();
    debug_assert!(relations.iter().all(|r| r.n() == n));
    if let Some(c) = copies {
        if relations.len() != 1 {
            eprintln!("error: --copies needs a single-relation instance");
            return ExitCode::from(EXIT_PARSE);
        }
        if c < 2 {
            eprintln!("error: --copies needs N ≥ 2");
            return ExitCode::from(EXIT_GUARD);
        }
        relations = vec![relations[0].clone(); c];
    }
    let systems: Vec<System> = relations.iter().cloned().map(System::Iterated).collect();
    let tags: Vec<PropertyTag> = if properties.is_empty() {
        if systems.len() == 1 {
            PropertyTag::ALL_SINGLE.to_vec()
        } else {
            PropertyTag::ALL_DISJOINT.to_vec()
        }
    } else {
        properties.to_vec()
    };
    let mut all_match = true;
    for tag in tags {
        if tag.is_disjoint() && systems.len() < 2 {
            eprintln!("error: {tag} needs an N-tuple (use --copies or relation: blocks)");
            return ExitCode::from(EXIT_PARSE);
        }
        match dynamics::decide(tag, &systems, &inst.topology, &fam) {
            Ok(v) => {
                println!("{tag} {fam} -> {v}");
                if let Some(e) = &expect {
                    if !e.matches(v.status) {
                        all_match = false;
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_GUARD);
            }
        }
    }
    if show_s_sets {
        print_s_sets(&relations, &inst.topology);
    }
    if expect.is_some() && !all_match {
        return ExitCode::from(EXIT_REFUTED);
    }
    ExitCode::SUCCESS
}

fn print_s_sets(relations: &[hyperrel_core::BooleanRelation], top: &FiniteTopology) {
    if relations.len() == 1 {
        let trace = relations[0].power_trace();
        let mut sets: BTreeSet<EventuallyPeriodicSet> = BTreeSet::new();
        for u in top.nonempty_opens() {
            for v in top.nonempty_opens() {
                sets.insert(hit_set_uv(&trace, u, v));
            }
        }
        for s in sets {
            println!("S-set: {s}");
        }
    } else {
        let systems: Vec<System> =
            relations.iter().cloned().map(System::Iterated).collect();
        let mut sets: BTreeSet<EventuallyPeriodicSet> = BTreeSet::new();
        let n = relations[0].n();
        let opens: Vec<_> = top.nonempty_opens().collect();
        for x in 0..n {
            let mut assign = vec![0usize; relations.len()];
            loop {
                let targets: Vec<_> = assign.iter().map(|&i| opens[i]).collect();
                if let Ok(s) = dynamics::d_hit_set(&systems, x, &targets) {
                    sets.insert(s);
                }
                let mut j = 0;
                loop {
                    if j == assign.len() {
                        break;
                    }
                    assign[j] += 1;
                    if assign[j] < opens.len() {
                        break;
                    }
                    assign[j] = 0;
                    j += 1;
                }
                if j == assign.len() {
                    break;
                }
            }
        }
        for s in sets {
            println!("d-S-set: {s}");
        }
    }
}

fn cmd_verify(
    suite: &str,
    max_n: Option<usize>,
    seed: u64,
    sample_cap: Option<usize>,
) -> ExitCode {
    let opts = SuiteOptions { max_n, seed, sample_cap };
    match run_suite(suite, &opts) {
        Ok(report) => {
            print!("{}", report.render());
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_REFUTED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_GUARD)
        }
    }
}

fn cmd_survey(n: usize, iso: bool, strong_only: bool) -> ExitCode {
    match digraphs::survey(n, iso, strong_only) {
        Ok(rows) => {
            let mut s_values: Vec<usize> = rows.iter().map(|r| r.s_value).collect();
            for r in &rows {
                let exp = r.exponent.map_or("-".to_string(), |e| e.to_string());
                println!(
                    "class {} S={} exponent={} strong={}",
                    r.bit_string, r.s_value, exp, r.strongly_connected
                );
            }
            s_values.sort_unstable();
            let max = s_values.last().copied().unwrap_or(0);
            let extremal = rows.iter().filter(|r| r.s_value == max).count();
            println!("classes: {}", rows.len());
            println!(
                "S-values: [{}] max={} attained-by={}",
                s_values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                max,
                extremal
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_GUARD)
        }
    }
}

fn cmd_enumerate(what: Kind, n: usize, iso: bool) -> ExitCode {
    match what {
        Kind::Topologies => match FiniteTopology::enumerate_all(n) {
            Ok(all) => {
                for (i, t) in all.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", t.to_text());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_GUARD)
            }
        },
        Kind::Tournaments => match digraphs::enumerate_tournaments(n, iso) {
            Ok(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", t.to_text());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_GUARD)
            }
        },
    }
}
