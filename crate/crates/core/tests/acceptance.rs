//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use wiretap_ot::adversary::{merge_views, AttackSpec};
use wiretap_ot::analysis::capacity::{c1p, c1p_n, c2p, c2p_n, capacities, degraded_lower, degraded_upper};
use wiretap_ot::analysis::{
    exact_leakage, monte_carlo, rate_region, run_trials, write_summary_csv, write_trials_csv, McConfig, OracleConfig,
};
use wiretap_ot::gf2::{BitMatrix, BitVec};
use wiretap_ot::hash::{exact_hash_entropy, pa_bound, pa_leakage, renyi2, FiniteDistribution};
use wiretap_ot::ih::{all_full_rank_matrices, greedy_hit_rate, hit_rate_bound, ih_exhaustive_check};
use wiretap_ot::protocol::{search_block_length, ParamRequest, Party, ProtocolParams, Variant};
use wiretap_ot::rng::{rng_from_seed, sorted_difference};

const TOL: f64 = 1e-12;
const MASTER_SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

fn grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| i as f64 / (points + 1) as f64).collect()
}

fn capacity_formulas() -> Outcome {
    let mut ok = close(capacities(0.5, 0.5, 2).unwrap().c2p, 0.25);
    for (e1, e2, want) in [(0.2, 0.6, 0.2), (0.4, 0.6, 0.3), (0.7, 0.6, 0.18)] {
        ok &= close(c1p(e1, e2), want);
    }
    let reduction = grid(99).iter().all(|&e1| close(c2p(e1, 1.0), e1.min(1.0 - e1)));
    outcome(ok && reduction, format!("worked values ok={ok}, eps2=1 reduction on 99 points ok={reduction}"))
}

fn one_of_n_consistency() -> Outcome {
    let g = grid(19);
    let (mut agree, mut monotone) = (true, true);
    for &e1 in &g {
        for &e2 in &g {
            agree &= close(c2p_n(e1, e2, 2), c2p(e1, e2));
            agree &= close(c1p_n(e1, e2, 2), c1p(e1, e2));
            for k in 2..12 {
                monotone &= c2p_n(e1, e2, k + 1) <= c2p_n(e1, e2, k) + TOL;
                monotone &= c1p_n(e1, e2, k + 1) <= c1p_n(e1, e2, k) + TOL;
            }
        }
    }
    outcome(agree && monotone, format!("N=2 agrees={agree}, nonincreasing in N={monotone}"))
}

fn breakpoints(vertices: &[(f64, f64)]) -> Vec<f64> {
    let mut coords: Vec<f64> = vertices.iter().flat_map(|&(x, y)| [x, y]).filter(|&c| c > TOL).collect();
    coords.sort_by(f64::total_cmp);
    coords.dedup_by(|a, b| close(*a, *b));
    coords
}

fn show(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join("/")
}

fn pair_region() -> Outcome {
    let g = grid(19);
    let contained = g.iter().all(|&e1| g.iter().all(|&e2| rate_region(e1, e2).inner_within_outer()));
    let r = rate_region(0.4, 0.7);
    let want = [0.12, 0.16, 0.28];
    let matches = |v: &[f64]| v.len() == want.len() && v.iter().zip(&want).all(|(a, b)| close(*a, *b));
    let (inner, outer) = (breakpoints(&r.inner_vertices), breakpoints(&r.outer_vertices));
    outcome(
        contained && matches(&inner) && matches(&outer),
        format!(
            "inner within outer on 19x19={contained}; (0.4, 0.7) breakpoints inner {}, outer {}",
            show(&inner),
            show(&outer)
        ),
    )
}

fn degraded_bounds() -> Outcome {
    let g = grid(99);
    let mut tight_cells = 0;
    let mut tight = true;
    for &e1 in &g {
        for &e2 in &g {
            if e1 <= e2 * (1.0 - e1) / 3.0 {
                tight_cells += 1;
                tight &= close(degraded_lower(e1, e2), degraded_upper(e1, e2));
                tight &= close(degraded_lower(e1, e2), e1);
            }
        }
    }
    let at = degraded_lower(0.1, 0.6);
    let ok = tight && tight_cells > 0 && close(at, 0.1);
    outcome(ok, format!("bounds coincide on {tight_cells} grid cells={tight}; value at (0.1, 0.6) = {at}"))
}

/// Every invertible 3x3 matrix over GF(2).
fn general_linear_3() -> Vec<BitMatrix> {
    (0u64..1 << 9)
        .filter_map(|idx| {
            let rows: Vec<BitVec> = (0..3).map(|r| BitVec::from_u64(idx >> (3 * r) & 7, 3)).collect();
            let m = BitMatrix::from_rows(rows, 3).unwrap();
            (m.rank() == 3).then_some(m)
        })
        .collect()
}

fn interactive_hashing() -> Outcome {
    let report = ih_exhaustive_check(3).unwrap();
    // Each rank-2 2x3 matrix is the top of exactly four invertible 3x3 ones,
    // so uniformity over the 168 completions equals uniformity over the 42.
    let gl3 = general_linear_3();
    let mut tops: HashMap<String, usize> = HashMap::new();
    for m in &gl3 {
        let top = BitMatrix::from_rows(vec![m.row(0).clone(), m.row(1).clone()], 3).unwrap();
        *tops.entry(format!("{top:?}")).or_default() += 1;
    }
    let rank2 = all_full_rank_matrices(3);
    let lift = gl3.len() == 168 && tops.len() == rank2.len() && tops.values().all(|&c| c == 4);

    let mut rng = rng_from_seed(MASTER_SEED ^ 0x1f);
    let mut worst = 0.0f64;
    let mut hits_ok = true;
    for k in [8, 10, 12] {
        for density_log2 in [3, 5] {
            let r = greedy_hit_rate(k, density_log2, 10_000, &mut rng).unwrap();
            let good = (1usize << k) >> density_log2;
            hits_ok &= r.passed() && close(r.bound, hit_rate_bound(k, good));
            worst = worst.max(r.hit_rate / r.bound);
        }
    }
    outcome(
        report.passed() && lift && hits_ok,
        format!(
            "k=3: {} rank-2 matrices ({} invertible completions, 4 each={lift}), co-output count {} for every pair, \
             exhaustive ok={}; greedy hit rate at most {:.3} of the bound",
            report.matrices,
            gl3.len(),
            report.co_output_count,
            report.passed(),
            worst
        ),
    )
}

fn battery(in_len: usize, rng: &mut impl Rng) -> Vec<FiniteDistribution> {
    let size = 1usize << in_len;
    let mut out = vec![FiniteDistribution::point(size, 0), FiniteDistribution::point(size, size - 1)];
    let all: Vec<usize> = (0..size).collect();
    for j in 0..=in_len {
        let prefix: Vec<usize> = (0..1 << j).collect();
        out.push(FiniteDistribution::uniform_on(size, &prefix).unwrap());
        let mut shuffled = all.clone();
        shuffled.shuffle(rng);
        out.push(FiniteDistribution::uniform_on(size, &shuffled[..1 << j]).unwrap());
    }
    for _ in 0..4 {
        let w: Vec<f64> = (0..size).map(|_| rng.random::<f64>().powi(3)).collect();
        out.push(FiniteDistribution::from_weights(&w).unwrap());
        let mut w = vec![0.0; size];
        w[rng.random_range(0..size)] += 0.5;
        let k = rng.random_range(0..=in_len);
        for v in all.choose_multiple(rng, 1 << k) {
            w[*v] += 0.5 / (1 << k) as f64;
        }
        out.push(FiniteDistribution::from_weights(&w).unwrap());
    }
    out
}

fn privacy_amplification() -> Outcome {
    let mut rng = rng_from_seed(MASTER_SEED ^ 0x2f);
    let (mut checked, mut worst) = (0usize, f64::INFINITY);
    for in_len in 1..=6 {
        for d in battery(in_len, &mut rng) {
            let c = renyi2(&d);
            for out_len in 1..=in_len {
                let h = exact_hash_entropy(&d, out_len).unwrap();
                worst = worst.min(h - pa_bound(out_len, c));
                checked += 1;
            }
        }
    }
    outcome(worst >= -1e-9, format!("{checked} (distribution, out_len) pairs, min H - bound = {worst:.4}"))
}

fn p1_honest() -> Outcome {
    let p = derive(ParamRequest::new(Variant::C2p, 0.8 * c2p(0.5, 0.5), 0.5, 0.5, 20_000));
    let (stats, records) = monte_carlo(&McConfig::new(p.clone(), 200, MASTER_SEED)).unwrap();
    let wrong = stats.completed - stats.correct;
    let covered = records.iter().filter(|r| r.margin.is_some_and(|m| m >= 0)).count();
    let share = covered as f64 / stats.trials as f64;
    outcome(
        wrong == 0 && stats.abort_rate <= 0.01 && share >= 0.99,
        format!(
            "m={} n={}; {} wrong, abort rate {:.3}, residual >= m in {:.1}% of runs",
            p.m,
            p.n,
            wrong,
            stats.abort_rate,
            100.0 * share
        ),
    )
}

fn p1_oracle() -> Outcome {
    let r = exact_leakage(&OracleConfig::c2p()).unwrap();
    let ua = r.i_u_aliceeve.unwrap();
    let kb = r.i_kbar_bobeve.unwrap();
    let ae = r.i_all_eve.unwrap();
    let (bkb, bae) = (r.bounds["i_kbar_bobeve"], r.bounds["i_all_eve"]);
    let ok = ua.abs() <= 1e-9 && r.p_err == 0.0 && kb <= bkb && ae <= bae;
    outcome(
        ok,
        format!(
            "{}; I(U;V_A,V_E)={ua:.2e}, P_err={}, I(K_Ubar;V_B,V_E)={kb:.4} <= {bkb:.4}, \
             I(K0,K1,U;V_E)={ae:.4} <= {bae:.4}",
            r.family, r.p_err
        ),
    )
}

fn p2_structure() -> Outcome {
    let p = derive(ParamRequest::new(Variant::C1p, 0.24, 0.4, 0.6, 20_000));
    let cfg = McConfig::new(p.clone(), 100, MASTER_SEED);
    let rows = run_trials(&cfg, |_, out| {
        if out.aborted() {
            return Ok(None);
        }
        let y = out.bob.y.as_ref().unwrap();
        let unchosen = &out.selections[1 - out.choice()];
        Ok(Some((y.count_erased_in(unchosen), out.correct() == Some(true))))
    })
    .unwrap();
    let done: Vec<(usize, bool)> = rows.into_iter().flatten().collect();
    let min_erased = done.iter().map(|r| r.0).min().unwrap_or(0);
    let correct = done.iter().filter(|r| r.1).count();
    outcome(
        !done.is_empty() && min_erased >= p.nr && correct == done.len(),
        format!(
            "{} completed runs, {} correct; min erased in L_Ubar {} vs nr {}",
            done.len(),
            correct,
            min_erased,
            p.nr
        ),
    )
}

fn p3_detection() -> Outcome {
    let p = derive(ParamRequest::new(Variant::MalLeHalf, 0.005, 0.4, 0.5, 3000));
    let s = (0.1 * p.n as f64).ceil() as usize;
    let (attack, _) = monte_carlo(&McConfig::new(p.clone(), 200, MASTER_SEED).with_attack(AttackSpec::bob_swap(s))).unwrap();
    let (honest, _) = monte_carlo(&McConfig::new(p, 200, MASTER_SEED + 1)).unwrap();
    outcome(
        attack.detection_rate >= 0.95 && honest.abort_rate <= 0.02,
        format!(
            "bob_swap({s}) detection {:.3}; honest abort {:.3}",
            attack.detection_rate, honest.abort_rate
        ),
    )
}

fn p4_packing() -> Outcome {
    let (e1, e2) = (0.7, 0.5);
    let probe = derive(ParamRequest::new(Variant::MalGtHalf, 0.01, e1, e2, 2000));
    let (n, density) = search_block_length(e1, probe.delta, 2000, 100).unwrap();
    let shape = ParamRequest::new(Variant::MalGtHalf, 0.01, e1, e2, n).delta(probe.delta);
    let bound = shape.malicious_rate_bound().unwrap();
    let p = derive(ParamRequest { r: bound / 2.0, ..shape });
    let (honest, _) = monte_carlo(&McConfig::new(p.clone(), 200, MASTER_SEED)).unwrap();

    let bn = p.beta_n as f64;
    let need = bn * (e1 * e2 - 2.0 * p.delta);
    let ceiling = (-(p.delta + p.delta_prime) * bn).exp2() / std::f64::consts::LN_2;
    let cfg = McConfig::new(p.clone(), 200, MASTER_SEED + 1).with_attack(AttackSpec::bob_pack());
    let rows = run_trials(&cfg, |_, out| {
        if out.aborted() {
            return Ok(None);
        }
        let psi = merge_views(out, &[Party::Bob, Party::Eve])?.observations()?.unwrap();
        let best = out.key_inputs.iter().map(|k| psi.count_erased_in(k)).max().unwrap();
        Ok(Some(best))
    })
    .unwrap();
    let done: Vec<usize> = rows.into_iter().flatten().collect();
    let good = done.iter().filter(|&&c| c as f64 >= need).count();
    let leak_ok = done
        .iter()
        .filter(|&&c| c as f64 >= need)
        .all(|&c| pa_leakage(p.m, c as f64) <= ceiling);
    let share = good as f64 / done.len().max(1) as f64;
    outcome(
        honest.abort_rate <= 0.10 && !done.is_empty() && share >= 0.95 && leak_ok,
        format!(
            "n={n} (range density {density:.3}), m={}, honest abort {:.3}; bob_pack: {good}/{} completed runs \
             keep >= {need:.1} erasures, leakage within {ceiling:.2e}={leak_ok}",
            p.m,
            honest.abort_rate,
            done.len()
        ),
    )
}

fn p5_pair() -> Outcome {
    let (e1, e2) = (0.7, 0.5);
    let p = derive(ParamRequest::new(Variant::IndependentPair, 0.12, e1, e2, 20_000).cathy_rate(0.16));
    let (stats, _) = monte_carlo(&McConfig::new(p.clone(), 100, MASTER_SEED)).unwrap();
    let rb = p.rate();
    let rc = p.cathy.as_ref().unwrap().set_size as f64 / p.n as f64;
    let inside = rate_region(e1, e2).inner.contains(rb, rc);
    outcome(
        stats.completed > 0 && stats.correct == stats.completed && inside,
        format!(
            "{}/{} completed runs recover both strings; achieved (r_B, r_C) = ({rb:.4}, {rc:.4}) inside inner={inside}",
            stats.correct, stats.completed
        ),
    )
}

fn p6_degraded() -> Outcome {
    let p = derive(ParamRequest::new(Variant::Degraded, 0.08, 0.1, 0.6, 30_000));
    let cfg = McConfig::new(p.clone(), 100, MASTER_SEED);
    let rows = run_trials(&cfg, |_, out| {
        if out.key_inputs.is_empty() {
            return Ok(None);
        }
        let extra: Vec<Vec<usize>> = out
            .key_inputs
            .iter()
            .zip(&out.selections)
            .map(|(k, l)| sorted_difference(k, l))
            .collect();
        let exact = out
            .key_inputs
            .iter()
            .zip(&out.selections)
            .all(|(k, l)| k.len() == l.len() + extra[0].len())
            && extra[0] == extra[1];
        Ok(Some((exact, out.correct() == Some(true))))
    })
    .unwrap();
    let done: Vec<(bool, bool)> = rows.into_iter().flatten().collect();
    let exact = done.iter().all(|r| r.0);
    let correct = done.iter().filter(|r| r.1).count();

    let r = exact_leakage(&OracleConfig::degraded()).unwrap();
    let ua = r.i_u_alice.unwrap();
    let ue = r.i_u_eve.unwrap();
    let bound = r.bounds["i_u_eve"];
    outcome(
        !done.is_empty() && exact && correct == done.len() && ua.abs() <= 1e-9 && ue <= bound + 1e-9,
        format!(
            "{} runs reached reconstruction, exact={exact}, {correct} correct; n=8 oracle I(U;V_A)={ua:.2e}, \
             I(U;V_E)={ue:.4} (bound {bound:.4})",
            done.len()
        ),
    )
}

fn write_run(dir: &Path) {
    let p = derive(ParamRequest::new(Variant::MalLeHalf, 0.005, 0.4, 0.5, 3000));
    let cfg = McConfig::new(p, 40, MASTER_SEED).with_attack(AttackSpec::bob_swap(300));
    let (stats, records) = monte_carlo(&cfg).unwrap();
    write_summary_csv(&[stats.clone()], fs::File::create(dir.join("summary.csv")).unwrap()).unwrap();
    write_trials_csv(&[(stats, records)], fs::File::create(dir.join("trials.csv")).unwrap()).unwrap();
    let report = exact_leakage(&OracleConfig::degraded()).unwrap();
    fs::write(dir.join("oracle.json"), serde_json::to_vec_pretty(&report).unwrap()).unwrap();
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_run(a.path());
    write_run(b.path());
    let names = ["summary.csv", "trials.csv", "oracle.json"];
    let same: Vec<&str> = names
        .into_iter()
        .filter(|f| fs::read(a.path().join(f)).unwrap() == fs::read(b.path().join(f)).unwrap())
        .collect();
    outcome(same.len() == names.len(), format!("identical files: {}", same.join(", ")))
}

fn derive(req: ParamRequest) -> ProtocolParams {
    req.derive().unwrap_or_else(|e| panic!("{e}"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("capacity formulas", Duration::from_secs(1), capacity_formulas),
        ("1-of-N consistency", Duration::from_secs(1), one_of_n_consistency),
        ("pair rate region", Duration::from_secs(1), pair_region),
        ("degraded bounds", Duration::from_secs(1), degraded_bounds),
        ("interactive hashing", Duration::from_secs(30), interactive_hashing),
        ("privacy amplification", Duration::from_secs(60), privacy_amplification),
        ("2-private honest runs", Duration::from_secs(120), p1_honest),
        ("2-private exact oracle", Duration::from_secs(300), p1_oracle),
        ("1-private structure", Duration::from_secs(60), p2_structure),
        ("swap detection", Duration::from_secs(120), p3_detection),
        ("packing resistance", Duration::from_secs(180), p4_packing),
        ("independent pair", Duration::from_secs(60), p5_pair),
        ("degraded channel", Duration::from_secs(180), p6_degraded),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= *limit;
        failed += usize::from(!pass);
        println!(
            "[{}] {:>2} {name}: {} ({:.2?}, limit {:?})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took,
            limit
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
