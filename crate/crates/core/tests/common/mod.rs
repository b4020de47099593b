#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use crosscap_core::census::{ingest_csv, CensusRecord};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(rel: &str) -> Vec<CensusRecord> {
    let f = File::open(data_dir().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    let got = ingest_csv(f).expect("fixture ingests");
    assert!(got.errors.is_empty(), "{rel}: {:?}", got.errors);
    got.records
}

pub fn knots() -> Vec<CensusRecord> {
    load("census/knots_3_12.csv")
}

pub fn links() -> Vec<CensusRecord> {
    load("census/links_2_11.csv")
}

pub fn up_to(records: Vec<CensusRecord>, c: usize) -> Vec<CensusRecord> {
    records
        .into_iter()
        .filter(|r| r.gauss.crossing_count() <= c)
        .collect()
}

/// Rows of a golden CSV as header -> value maps.
pub fn golden(rel: &str) -> Vec<BTreeMap<String, String>> {
    let mut rdr =
        csv::Reader::from_path(data_dir().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    let headers = rdr.headers().unwrap().clone();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            headers
                .iter()
                .zip(r.iter())
                .map(|(h, v)| (h.to_string(), v.trim().to_string()))
                .collect()
        })
        .collect()
}

use std::sync::OnceLock;

use crosscap_core::census::{defect_report, process_batch, summarize, BatchOptions, ResultRow};

pub fn knot_rows() -> &'static [ResultRow] {
    static ROWS: OnceLock<Vec<ResultRow>> = OnceLock::new();
    ROWS.get_or_init(|| process_batch(&knots(), &BatchOptions::default()).unwrap())
}

pub fn link_rows() -> &'static [ResultRow] {
    static ROWS: OnceLock<Vec<ResultRow>> = OnceLock::new();
    ROWS.get_or_init(|| process_batch(&links(), &BatchOptions::default()).unwrap())
}

fn num(row: &BTreeMap<String, String>, key: &str) -> f64 {
    row[key]
        .parse()
        .unwrap_or_else(|_| panic!("{key}={}", row[key]))
}

/// Compares distribution rows with crossing number <= `max_c` against a golden table.
pub fn compare_summary(rows: &[ResultRow], rel: &str, max_c: usize) -> Result<usize, String> {
    let table = summarize(rows);
    let mut checked = 0;
    for g in golden(rel) {
        let c = num(&g, "c") as usize;
        if c > max_c {
            continue;
        }
        let row = table
            .rows
            .iter()
            .find(|r| r.crossings == c)
            .ok_or_else(|| format!("{rel}: no computed row for c={c}"))?;
        let d = if g["invariant"] == "Gamma" {
            &row.genus
        } else {
            &row.crosscap
        };
        let tag = format!("{rel} c={c} {}", g["invariant"]);
        for v in 1..=9 {
            let want = num(&g, &format!("n{v}")) as usize;
            if d.count(v) != want {
                return Err(format!(
                    "{tag}: count of {v} is {} (want {want})",
                    d.count(v)
                ));
            }
        }
        if format!("{:.2}", d.mean) != format!("{:.2}", num(&g, "mean")) {
            return Err(format!("{tag}: mean {:.4} (want {})", d.mean, g["mean"]));
        }
        if d.median != num(&g, "median") {
            return Err(format!("{tag}: median {} (want {})", d.median, g["median"]));
        }
        if d.mode_text() != g["mode"] {
            return Err(format!(
                "{tag}: mode {} (want {})",
                d.mode_text(),
                g["mode"]
            ));
        }
        if d.max != num(&g, "max") as usize {
            return Err(format!("{tag}: max {} (want {})", d.max, g["max"]));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Compares defect rows with crossing number <= `max_c` against a golden table.
pub fn compare_defects(rows: &[ResultRow], rel: &str, max_c: usize) -> Result<usize, String> {
    let table = defect_report(rows);
    let mut checked = 0;
    for g in golden(rel) {
        let c = num(&g, "c") as usize;
        if c > max_c {
            continue;
        }
        let row = table
            .rows
            .iter()
            .find(|r| r.crossings == c)
            .ok_or_else(|| format!("{rel}: no computed row for c={c}"))?;
        for (key, value) in &g {
            if let Some(x) = key.strip_prefix("gamma") {
                let x: usize = x.parse().unwrap();
                let got = row.by_crosscap.get(&x).copied().unwrap_or(0);
                if got != value.parse::<usize>().unwrap() {
                    return Err(format!("{rel} c={c}: {key} is {got} (want {value})"));
                }
            }
        }
        let want = (num(&g, "total") as usize, num(&g, "population") as usize);
        if (row.total, row.population) != want {
            return Err(format!(
                "{rel} c={c}: {}/{} (want {}/{})",
                row.total, row.population, want.0, want.1
            ));
        }
        if (row.proportion() - num(&g, "proportion")).abs() > 5e-6 {
            return Err(format!(
                "{rel} c={c}: proportion {:.5} (want {})",
                row.proportion(),
                g["proportion"]
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Crosscap numbers of the 174 ten-crossing links and the starred (defect) set.
pub fn compare_ten_crossing_links(rows: &[ResultRow]) -> Result<usize, String> {
    let golden = golden("golden/table3_links_10.csv");
    let mut starred = 0;
    for g in &golden {
        let r = rows
            .iter()
            .find(|r| r.name == g["Link"])
            .ok_or_else(|| format!("missing link {}", g["Link"]))?;
        let v = r.values().ok_or_else(|| format!("{} failed", r.name))?;
        if v.crosscap.to_string() != g["Crosscap Number"] {
            return Err(format!(
                "{}: crosscap {} (want {})",
                r.name, v.crosscap, g["Crosscap Number"]
            ));
        }
        let star = v.crosscap == v.unoriented_genus + 1;
        if star != (g["Starred"] == "1") {
            return Err(format!("{}: starred mismatch", r.name));
        }
        starred += star as usize;
    }
    if golden.len() != 174 || starred != 12 {
        return Err(format!("{} links, {starred} starred", golden.len()));
    }
    Ok(golden.len())
}

use crosscap_core::codec::GaussCode;
use crosscap_core::engine::{explore, EngineConfig};
use crosscap_core::invariants::compute_invariants;
use crosscap_core::smoothing::{
    smooth_anti_triangle, smooth_bigon, smooth_one_gon, smooth_triangle, BigonCase, GaussStateCode,
    MgonFinding,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Walks every reachable node, checking conservation, progress, bigon component
/// counts and m-gon existence. Returns the number of nodes visited.
pub fn walk_suite(records: &[CensusRecord]) -> Result<usize, String> {
    let mut nodes = 0;
    for r in records {
        let c = r.gauss.crossing_count();
        let mut err: Option<String> = None;
        let result = explore(&r.gauss, &EngineConfig::default(), |state, finding| {
            nodes += 1;
            if err.is_some() {
                return;
            }
            if let Err(e) = state.validate() {
                err = Some(format!("{}: {state}: {e}", r.name));
                return;
            }
            let Some(f) = finding else { return };
            let before = state.unsmoothed_count();
            let next: Vec<GaussStateCode> = match f {
                MgonFinding::OneGon { .. } => vec![smooth_one_gon(state, f).unwrap()],
                MgonFinding::Bigon { .. } => vec![smooth_bigon(state, f).unwrap()],
                MgonFinding::Triangle { .. } => {
                    vec![
                        smooth_triangle(state, f).unwrap(),
                        smooth_anti_triangle(state, f).unwrap(),
                    ]
                }
            };
            for n in &next {
                if let Err(e) = n.validate() {
                    err = Some(format!("{}: successor of {state}: {e}", r.name));
                }
                if n.unsmoothed_count() + f.size() != before {
                    err = Some(format!("{}: no progress at {state}", r.name));
                }
            }
            if let MgonFinding::Bigon { case, .. } = f {
                let delta = next[0].gauss().len() as isize - state.gauss().len() as isize;
                let want = match case {
                    BigonCase::OrientedKnot => 1,
                    BigonCase::UnorientedKnot => 0,
                    _ => -1,
                };
                if delta != want {
                    err = Some(format!(
                        "{}: bigon case {} changed components by {delta}",
                        r.name,
                        case.number()
                    ));
                }
            }
            if let MgonFinding::Triangle { .. } = f {
                if next[1].circles().len() != state.circles().len() {
                    err = Some(format!("{}: anti-triangle added a circle", r.name));
                }
            }
        })
        .map_err(|e| format!("{}: {e}", r.name))?;
        if let Some(e) = err {
            return Err(e);
        }
        if result.branch_count > 1usize << result.max_triangle_depth {
            return Err(format!("{}: {} branches", r.name, result.branch_count));
        }
        for leaf in &result.all_leaves {
            leaf.check_conservation()
                .map_err(|e| format!("{}: leaf {leaf}: {e}", r.name))?;
            if !(1..=c + 1).contains(&leaf.len()) {
                return Err(format!("{}: leaf with {} circles", r.name, leaf.len()));
            }
        }
    }
    Ok(nodes)
}

/// Checks 1 <= Gamma <= floor(c/2) and gamma <= floor(c/2) for c >= 3.
pub fn bound_suite(records: &[CensusRecord]) -> Result<usize, String> {
    let mut n = 0;
    for r in records.iter().filter(|r| r.gauss.crossing_count() >= 3) {
        let c = r.gauss.crossing_count();
        let rep = compute_invariants(&r.gauss).map_err(|e| format!("{}: {e}", r.name))?;
        if rep.unoriented_genus < 1 || rep.unoriented_genus > c / 2 || rep.crosscap > c / 2 {
            return Err(format!(
                "{}: Gamma={} gamma={} c={c}",
                r.name, rep.unoriented_genus, rep.crosscap
            ));
        }
        n += 1;
    }
    Ok(n)
}

/// A random rotation/reversal/permutation/relabeling of `g`.
pub fn scramble(g: &GaussCode, rng: &mut impl Rng) -> GaussCode {
    let mut comps: Vec<Vec<u32>> = g
        .components()
        .iter()
        .map(|c| c.iter().map(|l| l.get()).collect())
        .collect();
    for comp in &mut comps {
        let k = rng.gen_range(0..comp.len());
        comp.rotate_left(k);
        if rng.gen_bool(0.5) {
            comp.reverse();
        }
    }
    comps.shuffle(rng);
    let labels = g.labels();
    let mut fresh: Vec<u32> = (1..=labels.len() as u32 * 3).collect();
    fresh.shuffle(rng);
    let map: std::collections::HashMap<u32, u32> = labels
        .iter()
        .zip(&fresh)
        .map(|(l, f)| (l.get(), *f))
        .collect();
    for comp in &mut comps {
        for l in comp.iter_mut() {
            *l = map[l];
        }
    }
    GaussCode::new(comps).expect("scrambling keeps a valid code")
}

/// Invariants are unchanged by `trials` random transforms of fixture codes.
pub fn symmetry_suite(records: &[CensusRecord], trials: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let r = records.choose(&mut rng).expect("fixtures");
        let base = compute_invariants(&r.gauss).map_err(|e| e.to_string())?;
        let t = scramble(&r.gauss, &mut rng);
        let other = compute_invariants(&t).map_err(|e| format!("{} as {t}: {e}", r.name))?;
        if (base.unoriented_genus, base.crosscap, base.circle_count)
            != (other.unoriented_genus, other.crosscap, other.circle_count)
        {
            return Err(format!("{} changed under transform {t}", r.name));
        }
    }
    Ok(trials)
}

/// Engine against exhaustive search: maximum circle count, invariants, and the
/// simple-and-bipartite verdict over every optimal engine leaf.
pub fn oracle_suite(records: &[CensusRecord]) -> Result<usize, String> {
    use crosscap_core::invariants::{is_bipartite, is_simple};
    use crosscap_core::oracle::{brute_force_invariants, brute_force_max_circles, OracleConfig};

    let cfg = OracleConfig::default();
    for r in records {
        let engine = crosscap_core::engine::minimal_genus_states(&r.gauss)
            .map_err(|e| format!("{}: {e}", r.name))?;
        let (max, _) =
            brute_force_max_circles(&r.gauss, &cfg).map_err(|e| format!("{}: {e}", r.name))?;
        if engine.best.len() != max {
            return Err(format!(
                "{}: engine {} circles, oracle {max}",
                r.name,
                engine.best.len()
            ));
        }
        let ours = compute_invariants(&r.gauss).map_err(|e| format!("{}: {e}", r.name))?;
        let theirs =
            brute_force_invariants(&r.gauss, &cfg).map_err(|e| format!("{}: {e}", r.name))?;
        if (ours.unoriented_genus, ours.crosscap) != (theirs.unoriented_genus, theirs.crosscap) {
            return Err(format!("{}: invariants differ from the oracle", r.name));
        }
        let verdict = theirs.simple && theirs.bipartite;
        if engine
            .all_leaves
            .iter()
            .filter(|l| l.len() == max)
            .any(|l| (is_simple(l) && is_bipartite(l)) != verdict)
        {
            return Err(format!("{}: verdict differs across optimal leaves", r.name));
        }
    }
    Ok(records.len())
}
