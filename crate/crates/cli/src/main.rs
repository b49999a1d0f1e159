use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rotarr::arrangements::{isotropy_arrangement, reflection_arrangement, Arrangement};
use rotarr::groups::{
    enumerate_degree4_catalog, is_rotation_group, parse_group_spec, ClassTag, GroupFile, MatrixGroup,
};
use rotarr::verify::{self, VerificationReport};
use rotarr::Error;

#[derive(Parser)]
#[command(
    name = "rotarr",
    version,
    about = "Exact checks on subspace arrangements of the rotation groups G(m,1,2)"
)]
struct Cli {
    /// Write the machine-readable report to this path ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Include runtime_ms in JSON reports (makes them run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The isotropy arrangement of G(m,1,2) is {0} and m+2 pairwise trivial planes.
    LemmaAg {
        #[arg(long)]
        m: u32,
    },
    /// G(m,1,2) is generated by rotations and contains no reflections.
    Rotation {
        #[arg(long)]
        m: u32,
    },
    /// Seeded planes through both coordinate planes meet at most one plane y = zeta^j x.
    LemmaPlane {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orthogonal-splitting dichotomy for I2(p) x I2(q).
    Dichotomy {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Plane and member counts of the big-factor groups and the derived thresholds.
    Threshold,
    /// Non-containment of the isotropy arrangement in every reflection arrangement.
    Theorem {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        k_max: u32,
    },
    /// Catalog of degree-4 reflection groups.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Inspect a group given by catalog label, G(m,p,n), or a group file.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Compute an arrangement for a catalog label, G(m,p,n), or a group file.
    Arrangement {
        #[command(subcommand)]
        cmd: ArrangementCmd,
    },
    /// Exploratory listing of G(m,p,2) against standard-position catalog groups (unverified).
    Survey {
        #[arg(long, default_value_t = 6)]
        m_max: u32,
        #[arg(long, default_value_t = 8)]
        k_max: u32,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List {
        #[arg(long, default_value_t = 8)]
        k_max: u32,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Show { target: String },
}

#[derive(Subcommand)]
enum ArrangementCmd {
    Compute {
        target: String,
        #[arg(long, value_enum, default_value_t = Kind::Isotropy)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Isotropy,
    Reflection,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool set once");
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.cmd {
        Command::LemmaAg { m } => report(cli, verify::verify_lemma_ag(*m)?),
        Command::Rotation { m } => report(cli, verify::verify_rotation_group(*m)?),
        Command::LemmaPlane { m, samples, seed } => {
            if *samples == 0 {
                return Err(Error::InvalidParameters("--samples must be positive".into()));
            }
            report(cli, verify::verify_lemma_plane(*m, *samples, *seed)?)
        }
        Command::Dichotomy { p, q } => report(cli, verify::verify_dichotomy(*p, *q)?),
        Command::Threshold => report(cli, verify::verify_threshold()?),
        Command::Theorem { m, k_max } => report(cli, verify::verify_theorem(*m, *k_max)?),
        Command::Catalog {
            cmd: CatalogCmd::List { k_max },
        } => {
            let entries = enumerate_degree4_catalog(*k_max);
            println!(
                "{:<16} {:>6} {:>9} {:>10}",
                "label", "degree", "conductor", "big_factor"
            );
            for e in &entries {
                println!(
                    "{:<16} {:>6} {:>9} {:>10}",
                    e.label.to_string(),
                    e.degree,
                    e.conductor_required,
                    e.big_factor
                );
            }
            println!("{} groups", entries.len());
            write_json(cli, &serde_json::to_value(&entries)?)?;
            Ok(true)
        }
        Command::Group {
            cmd: GroupCmd::Show { target },
        } => {
            let g = load_group(target)?;
            let v = describe_group(&g);
            println!("group {}", g.name().unwrap_or(target));
            println!(
                "  ambient {}, conductor {}, order {}",
                g.ambient(),
                g.conductor(),
                g.order()
            );
            for (k, n) in v["classes"].as_object().expect("object") {
                println!("  {k}: {n}");
            }
            println!("  rotation group: {}", v["rotation_group"]);
            println!("  reflection group: {}", v["reflection_group"]);
            write_json(cli, &v)?;
            Ok(true)
        }
        Command::Arrangement {
            cmd: ArrangementCmd::Compute { target, kind },
        } => {
            let g = load_group(target)?;
            let a = match kind {
                Kind::Isotropy => isotropy_arrangement(&g),
                Kind::Reflection => reflection_arrangement(&g)?,
            };
            print_arrangement(&a);
            write_json(cli, &serde_json::to_value(&a)?)?;
            Ok(true)
        }
        Command::Survey { m_max, k_max } => {
            let rows = verify::survey(*m_max, *k_max)?;
            println!("exploratory listing; only standard positions of catalog groups are examined");
            for r in &rows {
                let within = if r.contained_in.is_empty() {
                    "-".to_string()
                } else {
                    r.contained_in.join(" ")
                };
                println!(
                    "{:<10} order {:>4} rotation {:<5} strata {:?} contained in: {}",
                    r.group, r.order, r.rotation_group, r.strata, within
                );
            }
            write_json(cli, &serde_json::to_value(&rows)?)?;
            Ok(true)
        }
    }
}

fn load_group(target: &str) -> Result<std::sync::Arc<MatrixGroup>, Error> {
    let path = Path::new(target);
    if path.is_file() {
        let file: GroupFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        return Ok(std::sync::Arc::new(MatrixGroup::from_file(
            file,
            rotarr::groups::DEFAULT_CAP,
        )?));
    }
    parse_group_spec(target)?.build()
}

fn describe_group(g: &MatrixGroup) -> Value {
    let classes: serde_json::Map<String, Value> = [
        ("identity", ClassTag::Identity),
        ("reflection", ClassTag::Reflection),
        ("rotation", ClassTag::Rotation),
        ("bireflection_plus", ClassTag::BireflectionPlus),
    ]
    .into_iter()
    .map(|(k, t)| (k.to_string(), json!(g.count_class(t))))
    .collect();
    json!({
        "group": g.to_file(),
        "order": g.order(),
        "classes": classes,
        "rotation_group": is_rotation_group(g).generated,
        "reflection_group": g.order() == 1 || g.generated_by_class(ClassTag::Reflection).generated,
    })
}

fn print_arrangement(a: &Arrangement) {
    const SHOWN: usize = 40;
    println!("{} members, strata by dimension {:?}", a.len(), a.strata());
    for (s, p) in a.subspaces.iter().zip(&a.provenance).take(SHOWN) {
        let basis: Vec<String> = s
            .basis()
            .iter()
            .map(|r| format!("({})", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let stab = p
            .stabilizer_order
            .map(|n| format!("  |stabilizer| {n}"))
            .unwrap_or_default();
        println!("  dim {}: span[{}]{stab}", s.dim(), basis.join(", "));
    }
    if a.len() > SHOWN {
        println!("  ... {} more", a.len() - SHOWN);
    }
}

fn write_json(cli: &Cli, v: &Value) -> Result<(), Error> {
    let Some(path) = &cli.json else { return Ok(()) };
    let text = serde_json::to_string_pretty(v)? + "\n";
    if path.as_os_str() == "-" {
        print!("{text}");
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn report(cli: &Cli, mut r: VerificationReport) -> Result<bool, Error> {
    println!("{}", r.summary());
    print_details(&r);
    for n in &r.notes {
        println!("  note: {n}");
    }
    if cli.timings {
        r = r.with_timing();
    }
    write_json(cli, &serde_json::to_value(&r)?)?;
    Ok(r.passed())
}

fn print_details(r: &VerificationReport) {
    let c = &r.certificate;
    match r.claim_id.as_str() {
        "lemma-AG" => {
            println!(
                "  group order {}, planes {} (expected {}), zero member {}, pairwise trivial {}",
                c["group_order"], c["plane_count"], c["expected_plane_count"], c["zero_member"], c["pairwise_trivial"]
            );
            let eqs: Vec<String> = c["planes"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|p| p["equation"].as_str().unwrap_or("?").to_string())
                .collect();
            println!("  planes: {}", eqs.join(", "));
        }
        "rotation" => {
            println!(
                "  order {}, nonidentity scanned {}, fix codims {}, generated by rotations {}",
                c["group_order"], c["nonidentity_scanned"], c["fix_codim_histogram"], c["generated_by_rotations"]
            );
        }
        "lemma-plane" => {
            println!(
                "  meet-count histogram {}, max {}, deliberate plane {}",
                c["histogram"], c["max_count"], c["deliberate_count"]
            );
            println!(
                "  phase over {} scalings: exactly constant {}, constant up to sign {}, constant for b/a > 0 {}",
                c["scalings_per_plane"],
                c["phase_exactly_constant"],
                c["phase_constant_up_to_sign"],
                c["phase_constant_same_sign"]
            );
            if !r.passed() {
                let w = c["witnesses"]
                    .as_array()
                    .and_then(|w| w.first())
                    .unwrap_or(&c["deliberate_plane"]);
                println!("  witness plane: {w}");
            }
        }
        "dichotomy" => {
            println!(
                "  {} of order {}: {} planes, V1 {}, V2 {}, meets both {}, neither {}",
                c["group"], c["group_order"], c["plane_count"], c["v1"], c["v2"], c["meets_both"], c["neither"]
            );
        }
        "threshold" => {
            for g in c["groups"].as_array().into_iter().flatten() {
                println!(
                    "  {:<8} order {:>5}  planes {:>4}  members {:>4}  strata {}",
                    g["label"].as_str().unwrap_or("?"),
                    g["order"],
                    g["planes"],
                    g["total"],
                    g["strata"]
                );
            }
            println!(
                "  max planes {}, max members {}, m0_planes {}, m0_total {}",
                c["max_planes_big_factor"], c["max_total_big_factor"], c["m0_planes"], c["m0_total"]
            );
        }
        "theorem" => {
            println!(
                "  A^G: {} planes, certified {}, by closure {}",
                c["ag"]["planes"], c["ag"]["certified"], c["ag"]["computed_by_closure"]
            );
            let groups = c["direct"]["groups"].as_array().cloned().unwrap_or_default();
            println!(
                "  (i) direct: {} over {} catalog groups",
                pass(&c["direct"]["holds"]),
                groups.len()
            );
            for g in &groups {
                if g["contained"] == json!(true) {
                    println!("      CONTAINED in {}", g["group"]);
                }
            }
            if let Some(g) = groups.iter().find(|g| g["group"] == json!("H4")) {
                println!("      e.g. H4: witness {}", g["witness"]["equation"]);
            }
            let cnt = &c["counting"];
            if cnt["applicable"] == json!(true) {
                println!(
                    "  (ii) counting: {} ({} planes > {})",
                    pass(&cnt["holds"]),
                    cnt["ag_planes"],
                    cnt["max_planes_big_factor"]
                );
            } else {
                println!("  (ii) counting: not applicable, m < m0_planes = {}", cnt["m0_planes"]);
            }
            let st = &c["structural"];
            println!(
                "  (iii) structural: {} (dichotomy over {} groups, pairwise trivial {}, {})",
                pass(&st["holds"]),
                st["dichotomy"].as_array().map_or(0, |d| d.len()),
                st["pairwise_trivial"],
                st["corollary"].as_str().unwrap_or("")
            );
            if st["corollary_holds"] == json!(false) {
                println!(
                    "      corollary fails: deliberate plane meets {} graph planes, sampled max {}",
                    st["deliberate_count"], st["sampled_max_count"]
                );
            }
        }
        _ => {}
    }
}

fn pass(v: &Value) -> &'static str {
    if v == &json!(true) {
        "pass"
    } else {
        "FAIL"
    }
}
