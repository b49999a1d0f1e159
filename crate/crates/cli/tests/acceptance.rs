//! Acceptance run: one PASS/FAIL line per criterion, with pinned tolerances.
//!
//! Criterion 5 is reported as FAIL. Its two claims do not hold as stated:
//! for even m a plane through both coordinate planes can meet both
//! `{y = ζ^j x}` and `{y = -ζ^j x}`, and the phase of `a v + b w` flips
//! sign with `b/a`. The test prints the witness and asserts the corrected
//! statements instead (count <= 1 for odd m, <= 2 for even m; phase
//! constant up to sign and constant for `b/a > 0`).

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use rotarr::arrangements::{isotropy_arrangement, reflection_arrangement};
use rotarr::groups::{catalog_group, enumerate_degree4_catalog, gmpn_order, CatalogLabel};
use rotarr::verify::{self, plane_suite};

struct Line {
    id: usize,
    ok: bool,
    detail: String,
}

fn line(id: usize, ok: bool, detail: String, started: Instant, budget: Duration) -> Line {
    let spent = started.elapsed();
    let in_budget = spent <= budget;
    let detail = format!("{detail}; {:.1}s of {}s budget", spent.as_secs_f64(), budget.as_secs());
    Line {
        id,
        ok: ok && in_budget,
        detail,
    }
}

struct Run {
    code: i32,
    stdout: String,
    json: String,
}

fn rotarr(args: &[&str], jobs: Option<usize>, dir: &Path, tag: &str) -> Run {
    let path = dir.join(format!("{tag}.json"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rotarr"));
    cmd.args(args).arg("--json").arg(&path);
    if let Some(j) = jobs {
        cmd.arg("--jobs").arg(j.to_string());
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        json: std::fs::read_to_string(&path).unwrap_or_default(),
    }
}

fn criterion_1() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut worst = Duration::ZERO;
    for m in 2..=12u32 {
        let s = Instant::now();
        let r = verify::verify_lemma_ag(m).unwrap();
        worst = worst.max(s.elapsed());
        let c = &r.certificate;
        ok &= r.passed()
            && c["plane_count"] == m + 2
            && c["strata"] == serde_json::json!([1, 0, m + 2, 0, 0])
            && c["pairwise_trivial"] == true
            && c["matches_closed_form"] == true;
    }
    let ok = ok && worst < Duration::from_secs(10);
    line(
        1,
        ok,
        format!(
            "m=2..12: {{0}} plus m+2 closed-form planes, pairwise trivial; slowest m {:.2}s (<10s)",
            worst.as_secs_f64()
        ),
        t,
        Duration::from_secs(110),
    )
}

fn criterion_2() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut worst = Duration::ZERO;
    for m in 2..=12u32 {
        let s = Instant::now();
        let r = verify::verify_rotation_group(m).unwrap();
        worst = worst.max(s.elapsed());
        let codims: Vec<&String> = r.certificate["fix_codim_histogram"]
            .as_object()
            .unwrap()
            .keys()
            .collect();
        ok &= r.passed() && codims.iter().all(|k| ["0", "2", "4"].contains(&k.as_str()));
    }
    let ok = ok && worst < Duration::from_secs(5);
    line(
        2,
        ok,
        format!(
            "m=2..12: rotation generated, fix codims in {{2,4}}; slowest m {:.2}s (<5s)",
            worst.as_secs_f64()
        ),
        t,
        Duration::from_secs(55),
    )
}

fn lower_degree_labels() -> Vec<String> {
    let mut v: Vec<String> = ["A1", "A1xA1", "A1xA1xA1", "A3", "B3", "H3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for k in 3..=12 {
        v.push(format!("I2({k})"));
        v.push(format!("I2({k})xA1"));
    }
    v
}

fn criterion_3() -> Line {
    let t = Instant::now();
    let mut labels: Vec<String> = enumerate_degree4_catalog(12)
        .iter()
        .map(|e| e.label.to_string())
        .collect();
    labels.extend(lower_degree_labels());
    let mut bad = Vec::new();
    for l in &labels {
        let w = catalog_group(&l.parse::<CatalogLabel>().unwrap()).unwrap();
        let iso = isotropy_arrangement(&w);
        let refl = reflection_arrangement(&w).unwrap();
        if iso.subspaces != refl.subspaces {
            bad.push(l.clone());
        }
    }
    line(
        3,
        bad.is_empty(),
        format!(
            "isotropy = reflection arrangement for {} groups (H4 included); mismatches {:?}",
            labels.len(),
            bad
        ),
        t,
        Duration::from_secs(300),
    )
}

fn criterion_4() -> Line {
    let t = Instant::now();
    let expected: [(&str, usize, usize); 11] = [
        ("A4", 120, 10),
        ("B4", 384, 16),
        ("D4", 192, 12),
        ("F4", 1152, 24),
        ("H4", 14400, 60),
        ("A3", 24, 6),
        ("B3", 48, 9),
        ("H3", 120, 15),
        ("I2(5)", 10, 5),
        ("I2(8)", 16, 8),
        ("I2(12)", 24, 12),
    ];
    let mut bad = Vec::new();
    for (l, order, refl) in expected {
        let w = catalog_group(&l.parse().unwrap()).unwrap();
        if w.order() != order || w.reflection_indices().len() != refl {
            bad.push(format!("{l}: ({}, {})", w.order(), w.reflection_indices().len()));
        }
    }
    for k in 3..=12u32 {
        let w = catalog_group(&format!("I2({k})").parse().unwrap()).unwrap();
        if w.order() != 2 * k as usize || w.reflection_indices().len() != k as usize {
            bad.push(format!("I2({k})"));
        }
    }
    for m in 2..=8u32 {
        let g = verify::verify_rotation_group(m).unwrap();
        let order = g.certificate["group_order"].as_u64().unwrap();
        if order != 2 * (m as u64) * (m as u64) || gmpn_order(m, 1, 2) != order as u128 {
            bad.push(format!("G({m},1,2): {order}"));
        }
    }
    line(
        4,
        bad.is_empty(),
        format!("orders and reflection counts exact; mismatches {bad:?}"),
        t,
        Duration::from_secs(120),
    )
}

fn criterion_5() -> Line {
    let t = Instant::now();
    let mut as_stated = true;
    let mut details = Vec::new();
    for m in [3u32, 5, 8] {
        let s = plane_suite(m, 1000, 0).unwrap();
        let corrected_bound = if m % 2 == 0 { 2 } else { 1 };
        // The corrected statements are asserted; the stated ones are reported.
        assert!(
            s.max_count <= corrected_bound,
            "m={m}: count {} exceeds {corrected_bound}",
            s.max_count
        );
        assert!(s.deliberate_count <= corrected_bound);
        assert!(s.phase_constant_up_to_sign && s.phase_constant_same_sign, "m={m}");
        if m % 2 == 1 {
            assert!(s.max_count <= 1);
        }
        let count_ok = s.max_count <= 1;
        as_stated &= count_ok && s.phase_exactly_constant;
        let witness = s
            .witnesses
            .first()
            .map(|p| {
                format!(
                    " witness {:?}",
                    p.basis()
                        .iter()
                        .map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                )
            })
            .unwrap_or_default();
        let flip = s
            .sign_flip_witness
            .as_ref()
            .map(|(a, b)| format!(" phase flips at (a,b)=({a},{b})"))
            .unwrap_or_default();
        details.push(format!(
            "m={m}: histogram {:?} max {}{witness}{flip}",
            s.histogram, s.max_count
        ));
    }
    line(
        5,
        as_stated,
        format!(
            "count <= 1 and exact phase constancy as stated; {}; corrected bounds (odd <= 1, even <= 2, phase up to sign) hold",
            details.join("; ")
        ),
        t,
        Duration::from_secs(120),
    )
}

fn criterion_6() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut n = 0;
    for p in 2..=8 {
        for q in 2..=8 {
            n += 1;
            if !verify::verify_dichotomy(p, q).unwrap().passed() {
                bad.push((p, q));
            }
        }
    }
    line(
        6,
        bad.is_empty() && n == 49,
        format!("{n} groups I2(p)xI2(q), 2<=p,q<=8; failures {bad:?}"),
        t,
        Duration::from_secs(120),
    )
}

fn criterion_7(dir: &Path) -> (Line, String, String) {
    let t = Instant::now();
    let th = rotarr(&["threshold"], None, dir, "threshold");
    let tv: Value = serde_json::from_str(&th.json).unwrap();
    let m0 = tv["certificate"]["m0_planes"].as_u64().unwrap();
    let m0_total = tv["certificate"]["m0_total"].as_u64().unwrap();
    let regression = m0 == 721
        && m0_total == 2101
        && tv["certificate"]["max_planes_big_factor"] == 722
        && tv["certificate"]["max_total_big_factor"] == 2103;
    let m0s = m0.to_string();
    let big = rotarr(&["theorem", "--m", &m0s, "--k-max", "8"], None, dir, "theorem-m0");
    let bv: Value = serde_json::from_str(&big.json).unwrap();
    let big_ok = big.code == 0
        && bv["certificate"]["direct"]["holds"] == true
        && bv["certificate"]["counting"]["applicable"] == true
        && bv["certificate"]["counting"]["holds"] == true
        && bv["certificate"]["structural"]["holds"] == true;
    let small = rotarr(&["theorem", "--m", "3", "--k-max", "6"], None, dir, "theorem-3");
    let sv: Value = serde_json::from_str(&small.json).unwrap();
    let small_ok = small.code == 0
        && sv["certificate"]["direct"]["holds"] == true
        && sv["certificate"]["counting"]["applicable"] == false
        && sv["certificate"]["structural"]["holds"] == true;
    assert!(big.stdout.contains("(ii) counting: pass"));
    let l = line(
        7,
        regression && big_ok && small_ok,
        format!(
            "m0_planes={m0} m0_total={m0_total}; theorem m={m0} exit {} (i,ii,iii); theorem m=3 exit {} (i,iii; ii not applicable)",
            big.code, small.code
        ),
        t,
        Duration::from_secs(600),
    );
    (l, big.json, small.json)
}

fn criterion_8(dir: &Path, big_json: &str, small_json: &str) -> Line {
    let t = Instant::now();
    let mut diffs = Vec::new();
    let mut compared = 0;
    let mut same = |args: &[&str], name: &str| {
        let a = rotarr(args, Some(1), dir, &format!("{name}-j1"));
        let b = rotarr(args, Some(4), dir, &format!("{name}-j4"));
        let c = rotarr(args, None, dir, &format!("{name}-again"));
        compared += 1;
        if a.json.is_empty() || a.json != b.json || a.json != c.json {
            diffs.push(name.to_string());
        }
        a.json
    };
    for m in [2, 7, 12] {
        let ms = m.to_string();
        same(&["lemma-ag", "--m", &ms], &format!("lemma-ag-{m}"));
        same(&["rotation", "--m", &ms], &format!("rotation-{m}"));
    }
    same(
        &["lemma-plane", "--m", "5", "--samples", "1000", "--seed", "0"],
        "lemma-plane-5",
    );
    same(
        &["lemma-plane", "--m", "8", "--samples", "1000", "--seed", "0"],
        "lemma-plane-8",
    );
    same(&["dichotomy", "--p", "8", "--q", "8"], "dichotomy-8-8");
    same(&["threshold"], "threshold");
    if same(&["theorem", "--m", "3", "--k-max", "6"], "theorem-3") != small_json {
        diffs.push("theorem-3 vs criterion 7".into());
    }
    let big = rotarr(
        &["theorem", "--m", "721", "--k-max", "8"],
        Some(2),
        dir,
        "theorem-721-j2",
    );
    compared += 1;
    if big.json != big_json {
        diffs.push("theorem-721".into());
    }
    line(
        8,
        diffs.is_empty(),
        format!("{compared} reports byte-identical across runs and --jobs 1/2/4/default; differing {diffs:?}"),
        t,
        Duration::from_secs(900),
    )
}

// Runs without the libtest harness so the criterion lines are always shown.
fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut lines = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
    ];
    let (l7, big, small) = criterion_7(dir.path());
    lines.push(l7);
    lines.push(criterion_8(dir.path(), &big, &small));
    for l in &lines {
        println!(
            "criterion {}: {} | {}",
            l.id,
            if l.ok { "PASS" } else { "FAIL" },
            l.detail
        );
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    // Criterion 5 cannot pass as stated; its corrected form is asserted above.
    assert_eq!(failed, vec![5], "unexpected criterion results");
}
