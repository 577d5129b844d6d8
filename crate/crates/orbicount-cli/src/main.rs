//! Command-line surface: subgroup censuses, homomorphism counts, bundle
//! classification dumps, and identity verification.
//!
//! Exit codes (frozen for CI use): 0 success, 1 verification mismatch,
//! 2 parse error or unknown id, 3 budget exceeded.

mod spec;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbicount::budget::Budget;
use orbicount::bundles::{
    brute_centralizer, centralizer_order_structural, decompose, BundleDecomposition,
};
use orbicount::groups::{hom_classes, GroupOps, Members, WreathCodec};
use orbicount::identities::{identity_ids, report_to_json, verify, VerifyParams};
use orbicount::presentations::Presentation;
use orbicount::subgroups::{census, hom_count_to_cyclic, orientability_split};
use orbicount::{Error, Int};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "orbicount",
    about = "Exact orbifold Euler characteristics of symmetric orbifolds, \
             subgroup censuses, and wreath-product homomorphism counts",
    version
)]
struct Cli {
    /// Cache directory for coset tables (env ORBICOUNT_CACHE overrides the
    /// default `.orbicount-cache`)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Output format. CSV columns: census -> index,j,u[,j_plus,j_minus];
    /// homcount -> hom_count,class_count; verify -> coeff,lhs,rhs,match
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Node cap for backtracking searches
    #[arg(long, global = true)]
    max_nodes: Option<u64>,

    /// Order cap for dense group tables
    #[arg(long, global = true)]
    order_cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct PresentationArgs {
    /// Builtin family: free, surface, nonorientable, free_abelian
    #[arg(long)]
    family: Option<String>,

    /// Size parameter for --family
    #[arg(long)]
    size: Option<usize>,

    /// Inline presentation text, e.g. "< a, b | [a,b] >"
    #[arg(long)]
    presentation: Option<String>,

    /// Presentation file (JSON schema or the textual grammar)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Low-index subgroup census: j_r, u_r, and the orientability split for
    /// non-orientable surface groups
    Census {
        #[command(flatten)]
        pres: PresentationArgs,

        /// Largest subgroup index to enumerate
        #[arg(long, default_value_t = 4)]
        max_index: usize,

        /// Cross-check the census against the abelianization recursion and
        /// homomorphism counts (exit 1 on mismatch)
        #[arg(long)]
        verify: bool,
    },

    /// Count |Hom(Gamma, G)| and |Hom(Gamma, G)/G|, with the product-with-Z
    /// cross-check
    Homcount {
        #[command(flatten)]
        pres: PresentationArgs,

        /// Target group: trivial, Zn:k, Sn:k, S3, Z4, or a JSON file of
        /// permutation generators
        #[arg(long)]
        group: String,

        /// Replace the target by the wreath product G wr S_n
        #[arg(long)]
        wreath_n: Option<usize>,
    },

    /// Decompose homomorphisms into wreath products as bundle data
    Bundles {
        #[command(flatten)]
        pres: PresentationArgs,

        /// Base group spec (as for homcount)
        #[arg(long)]
        group: String,

        /// Wreath degree
        #[arg(long)]
        n: usize,

        /// One homomorphism as JSON: {"images": [{"f": [...], "sigma": [...]}, ...]}
        #[arg(long)]
        theta: Option<String>,

        /// Classify every homomorphism class instead of a single map
        #[arg(long)]
        all: bool,
    },

    /// Verify a generating-function identity; exit 0 iff every coefficient
    /// matches
    Verify {
        /// Identity id (A, A', B, C-exp, C-prod, 5-7, 6-5, 5-9, 5-10, 6-7,
        /// 6-8, 8-1, 8-2, 5-22)
        #[arg(long)]
        id: String,

        /// Source group as family:size, e.g. surface:2 or free:2
        #[arg(long)]
        gamma: Option<String>,

        /// Coefficient group (as for homcount)
        #[arg(long, default_value = "trivial")]
        group: String,

        /// Series truncation
        #[arg(long, default_value_t = 4, visible_alias = "N")]
        truncation: usize,

        /// Index bound for census-shaped identities
        #[arg(long, default_value_t = 4)]
        m: usize,

        /// Order parameter d for the higher-order identities
        #[arg(long, default_value_t = 1)]
        d: usize,

        /// Prime for the p-primary flavors
        #[arg(long)]
        prime: Option<u64>,

        /// Virtual G-space JSON file (defaults to a point)
        #[arg(long)]
        space_file: Option<PathBuf>,

        /// Write the full report JSON here
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::InvalidArgument(_) | Error::Json(_) | Error::Io(_) => 2,
                Error::BudgetExceeded(_) | Error::CapExceeded(_) => 3,
                Error::VerificationFailed(_) => 1,
            }
        }
    });
}

fn run(cli: Cli) -> Result<i32, Error> {
    let budget = {
        let mut b = Budget::default();
        if let Some(n) = cli.max_nodes {
            b.search_nodes = n;
            b.hom_nodes = n;
        }
        if let Some(c) = cli.order_cap {
            b.group_order_cap = c;
        }
        b
    };
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("ORBICOUNT_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".orbicount-cache"));
    match cli.command {
        Command::Census { pres, max_index, verify: check } => {
            cmd_census(&pres, max_index, check, &budget, &cache_dir, cli.format)
        }
        Command::Homcount { pres, group, wreath_n } => {
            cmd_homcount(&pres, &group, wreath_n, &budget, cli.format)
        }
        Command::Bundles { pres, group, n, theta, all } => {
            cmd_bundles(&pres, &group, n, theta.as_deref(), all, &budget, cli.format)
        }
        Command::Verify {
            id,
            gamma,
            group,
            truncation,
            m,
            d,
            prime,
            space_file,
            report_out,
        } => {
            let g = spec::parse_group(&group)?;
            let space = match space_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let json: orbicount::spaces::VirtualGSpaceJson = serde_json::from_str(&text)?;
                    Some(orbicount::spaces::space_from_json(&g, &json)?)
                }
                None => None,
            };
            let params = VerifyParams {
                gamma: gamma.as_deref().map(spec::parse_gamma).transpose()?,
                group: g,
                group_name: group.clone(),
                space,
                truncation,
                max_m: m,
                direct_m: None,
                d,
                prime,
                budget,
                cache_dir: Some(cache_dir),
            };
            let report = verify(&id, &params)?;
            match cli.format {
                Format::Json => println!("{}", report_to_json(&report)),
                Format::Csv => {
                    println!("coeff,lhs,rhs,match");
                    for (k, ok) in report.matches.iter().enumerate() {
                        println!("{k},{},{},{}", report.lhs[k], report.rhs[k], ok);
                    }
                }
                Format::Text => {
                    println!("identity {}: {}", report.id, report.params);
                    println!("  lhs: [{}]", report.lhs.join(", "));
                    println!("  rhs: [{}]", report.rhs.join(", "));
                    for note in &report.notes {
                        println!("  note: {note}");
                    }
                    println!(
                        "  result: {} ({} ms lhs, {} ms rhs)",
                        if report.all_match { "MATCH" } else { "MISMATCH" },
                        report.lhs_millis,
                        report.rhs_millis
                    );
                }
            }
            if let Some(path) = report_out {
                std::fs::write(path, report_to_json(&report))?;
            }
            let _ = identity_ids();
            Ok(if report.all_match { 0 } else { 1 })
        }
    }
}

fn cmd_census(
    pres: &PresentationArgs,
    max_index: usize,
    check: bool,
    budget: &Budget,
    cache_dir: &std::path::Path,
    format: Format,
) -> Result<i32, Error> {
    let p = spec::parse_presentation_args(
        pres.family.as_deref(),
        pres.size,
        pres.presentation.as_deref(),
        pres.file.as_deref(),
    )?;
    let table = census(&p, max_index, budget, Some(cache_dir))?;
    let split = match p.catalog_family() {
        Some((orbicount::presentations::Family::Nonorientable, _)) => {
            let mut records = table.records.clone();
            Some(orientability_split(&p, &mut records)?)
        }
        _ => None,
    };

    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                index: usize,
                j: u64,
                u: u64,
                #[serde(skip_serializing_if = "Option::is_none")]
                j_plus: Option<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                j_minus: Option<u64>,
            }
            let rows: Vec<Row> = table
                .rows
                .iter()
                .map(|r| Row {
                    index: r.index,
                    j: r.j,
                    u: r.u,
                    j_plus: split.as_ref().map(|s| s.per_index[r.index - 1].1),
                    j_minus: split.as_ref().map(|s| s.per_index[r.index - 1].2),
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
        Format::Csv => {
            if split.is_some() {
                println!("index,j,u,j_plus,j_minus");
            } else {
                println!("index,j,u");
            }
            for r in &table.rows {
                match &split {
                    Some(s) => println!(
                        "{},{},{},{},{}",
                        r.index,
                        r.j,
                        r.u,
                        s.per_index[r.index - 1].1,
                        s.per_index[r.index - 1].2
                    ),
                    None => println!("{},{},{}", r.index, r.j, r.u),
                }
            }
        }
        Format::Text => {
            println!(
                "census of {} to index {max_index}{}",
                p.label().unwrap_or("<presentation>"),
                if table.crosschecked { " (transitive-count check passed)" } else { "" }
            );
            match &split {
                Some(s) => {
                    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "index", "j", "u", "j+", "j-");
                    for r in &table.rows {
                        println!(
                            "{:>6} {:>10} {:>10} {:>10} {:>10}",
                            r.index,
                            r.j,
                            r.u,
                            s.per_index[r.index - 1].1,
                            s.per_index[r.index - 1].2
                        );
                    }
                }
                None => {
                    println!("{:>6} {:>10} {:>10}", "index", "j", "u");
                    for r in &table.rows {
                        println!("{:>6} {:>10} {:>10}", r.index, r.j, r.u);
                    }
                }
            }
        }
    }

    if check {
        // (8-4) with both sides from this census: sum_{r|m} r u_r equals the
        // abelianization sums
        for m in 1..=max_index {
            let mut lhs = Int::from(0);
            let mut rhs = Int::from(0);
            for r in 1..=m {
                if m % r != 0 {
                    continue;
                }
                lhs += Int::from(r) * Int::from(table.u_of(r));
                for (rec, mult) in table.classes_of_index(m / r) {
                    rhs += Int::from(mult) * hom_count_to_cyclic(&rec.abelian_invariants, r)?;
                }
            }
            if lhs != rhs {
                eprintln!("(8-4) mismatch at m={m}: {lhs} != {rhs}");
                return Ok(1);
            }
        }
        // independent j_r route when affordable
        if let Ok(js) = orbicount::identities::census_from_homcounts(&p, max_index, budget) {
            for (r, j) in js.iter().enumerate() {
                if *j != Int::from(table.j_of(r + 1)) {
                    eprintln!("hom-count route mismatch at r={}: {} != {}", r + 1, j, table.j_of(r + 1));
                    return Ok(1);
                }
            }
        }
        println!("verify: (8-4) and hom-count routes agree");
    }
    Ok(0)
}

fn cmd_homcount(
    pres: &PresentationArgs,
    group: &str,
    wreath_n: Option<usize>,
    budget: &Budget,
    format: Format,
) -> Result<i32, Error> {
    let p = spec::parse_presentation_args(
        pres.family.as_deref(),
        pres.size,
        pres.presentation.as_deref(),
        pres.file.as_deref(),
    )?;
    let base = spec::parse_group(group)?;
    let (hom, classes) = match wreath_n {
        None => {
            let members = Members::whole(&base);
            let hom = orbicount::groups::hom_count(&p, &members, budget)?;
            let times_z = orbicount::groups::hom_count_times_z(&p, &members, budget)?;
            (hom, times_z / Int::from(base.order()))
        }
        Some(n) => {
            let codec = WreathCodec::new(base.clone(), n)?;
            let members = Members::whole(&codec);
            let hom = orbicount::groups::hom_count(&p, &members, budget)?;
            let times_z = orbicount::groups::hom_count_times_z(&p, &members, budget)?;
            (hom, times_z / Int::from(codec.order()))
        }
    };
    // cross-check the class count by direct orbit enumeration when small
    let class_direct: Option<usize> = match wreath_n {
        None if (base.order() as u128).pow(p.generator_count() as u32) <= 100_000 => {
            let members = Members::whole(&base);
            Some(hom_classes(&p, &members, budget)?.len())
        }
        _ => None,
    };
    if let Some(direct) = class_direct {
        if Int::from(direct) != classes {
            return Err(Error::VerificationFailed(format!(
                "orbit count {direct} disagrees with the product-with-Z count {classes}"
            )));
        }
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::json!({ "hom_count": hom.to_string(), "class_count": classes.to_string() })
        ),
        Format::Csv => {
            println!("hom_count,class_count");
            println!("{hom},{classes}");
        }
        Format::Text => {
            println!("|Hom| = {hom}");
            println!("|Hom / conjugation| = {classes}{}", match class_direct {
                Some(_) => " (orbit enumeration agrees)",
                None => "",
            });
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ComponentDump {
    orbit: Vec<usize>,
    index: usize,
    abelian_free_rank: usize,
    abelian_torsion: Vec<String>,
    rho: Vec<String>,
    aut_order: usize,
    multiplicity: usize,
}

#[derive(Serialize)]
struct ThetaDump {
    theta: Vec<String>,
    components: Vec<ComponentDump>,
    structural_centralizer_order: String,
    brute_centralizer_order: Option<String>,
}

fn dump_decomposition(
    p: &Presentation,
    codec: &WreathCodec,
    d: &BundleDecomposition,
) -> Result<(ThetaDump, bool), Error> {
    let g = codec.base();
    let mut components = Vec::new();
    for (key, members) in &d.grouped {
        let rep = &d.components[members[0]];
        let aut = orbicount::bundles::aut_data(&rep.record, g, &rep.rho)?;
        components.push(ComponentDump {
            orbit: rep.orbit.clone(),
            index: rep.record.index(),
            abelian_free_rank: rep.record.abelian_invariants.free_rank,
            abelian_torsion: rep
                .record
                .abelian_invariants
                .torsion
                .iter()
                .map(|t| t.to_string())
                .collect(),
            rho: key.rho.iter().map(|&x| g.label_of(x)).collect(),
            aut_order: aut.aut_order,
            multiplicity: members.len(),
        });
    }
    let structural = centralizer_order_structural(p, codec, d)?;
    let brute = if codec.order() <= 50_000 {
        Some(brute_centralizer(codec, &d.theta, 50_000)?.len())
    } else {
        None
    };
    let ok = brute.map_or(true, |b| Int::from(b) == structural);
    let theta_labels = d
        .theta
        .iter()
        .map(|&t| {
            let (f, sigma) = codec.decode(t);
            format!(
                "([{}], {:?})",
                f.iter().map(|&x| g.label_of(x)).collect::<Vec<_>>().join(","),
                sigma.images()
            )
        })
        .collect();
    Ok((
        ThetaDump {
            theta: theta_labels,
            components,
            structural_centralizer_order: structural.to_string(),
            brute_centralizer_order: brute.map(|b| b.to_string()),
        },
        ok,
    ))
}

fn cmd_bundles(
    pres: &PresentationArgs,
    group: &str,
    n: usize,
    theta: Option<&str>,
    all: bool,
    budget: &Budget,
    _format: Format,
) -> Result<i32, Error> {
    let p = spec::parse_presentation_args(
        pres.family.as_deref(),
        pres.size,
        pres.presentation.as_deref(),
        pres.file.as_deref(),
    )?;
    let base = spec::parse_group(group)?;
    let codec = WreathCodec::new(base, n)?;
    let mut dumps = Vec::new();
    let mut all_ok = true;
    if all {
        let members = Members::whole(&codec);
        let classes = hom_classes(&p, &members, budget)?;
        for (rep, _) in &classes {
            let d = decompose(&p, &codec, &rep.images, budget)?;
            let (dump, ok) = dump_decomposition(&p, &codec, &d)?;
            all_ok &= ok;
            dumps.push(dump);
        }
    } else {
        let text = theta.ok_or_else(|| Error::invalid("pass --theta or --all"))?;
        let images = spec::parse_theta(&codec, text)?;
        if !orbicount::groups::is_hom(&codec, &p, &images) {
            return Err(Error::invalid("theta does not satisfy the relators"));
        }
        let d = decompose(&p, &codec, &images, budget)?;
        let (dump, ok) = dump_decomposition(&p, &codec, &d)?;
        all_ok &= ok;
        dumps.push(dump);
    }
    println!("{}", serde_json::to_string_pretty(&dumps)?);
    if !all_ok {
        eprintln!("structural and brute-force centralizer orders disagree");
        return Ok(1);
    }
    Ok(0)
}
