//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use arrangeline_core::model::canonical_face;
use arrangeline_core::upset::{alphas, row_count};
use arrangeline_core::{
    build_wiring, canonical_face_set, choose_cut, default_wiring, draw, embed_on, enumerate_cycles_through,
    level_stats, match_rows, random_lines, recognize, same_face_set, shortest_cycle_through, solve, universal_points,
    valid_cuts, xi, xi_prefix_sum, ArrangementGraph, GridDrawing,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn row_budget_holds(d: &GridDrawing, l: usize) -> bool {
    alphas(d, l).iter().sum::<u64>() <= row_count(l) as u64
}

fn recognition_round_trip() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for l in 3..=30 {
        for seed in 0..20 {
            let arr = random_lines(l, seed).map_err(|e| e.to_string())?;
            let s = recognize(&arr.graph).map_err(|e| format!("l={l} seed={seed}: {e}"))?;
            ensure(s.l() == l, || format!("l={l} seed={seed}: found {} pseudolines", s.l()))?;
            ensure(arr.graph.n == l * (l - 1) / 2, || format!("l={l}: n={}", arr.graph.n))?;
            ensure(arr.graph.edges.len() == l * (l - 2), || format!("l={l}: m={}", arr.graph.edges.len()))?;
            let lines_of = |ps: &mut dyn Iterator<Item = Vec<usize>>| {
                let mut sets: Vec<Vec<usize>> = ps
                    .map(|mut c| {
                        c.sort_unstable();
                        c
                    })
                    .collect();
                sets.sort();
                sets
            };
            let found = lines_of(&mut s.pseudolines.iter().map(|p| p.crossings.clone()));
            let truth = lines_of(&mut arr.pseudolines.iter().cloned());
            ensure(found == truth, || format!("l={l} seed={seed}: pseudolines differ from the lines"))?;
            count += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("{count} instances in {secs:.2} s"))
}

fn mutation_rejection() -> Outcome {
    let mut total = 0;
    for l in [4, 5] {
        for seed in 0..10 {
            let g = random_lines(l, seed).map_err(|e| e.to_string())?.graph;
            for skip in 0..g.edges.len() {
                let mut edges = g.edges.clone();
                edges.remove(skip);
                ensure(recognize(&ArrangementGraph::new(g.n, edges)).is_err(), || {
                    format!("l={l} seed={seed}: deleting edge {skip} accepted")
                })?;
                total += 1;
            }
            for u in 0..g.n {
                for v in u + 1..g.n {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut edges = g.edges.clone();
                    edges.push((u, v));
                    ensure(recognize(&ArrangementGraph::new(g.n, edges)).is_err(), || {
                        format!("l={l} seed={seed}: inserting {u}-{v} accepted")
                    })?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} mutations rejected"))
}

fn theorem_two_dimensions() -> Outcome {
    let mut drawings = 0;
    for l in 3..=40 {
        for seed in 0..3 {
            let s = recognize(&random_lines(l, seed).map_err(|e| e.to_string())?.graph).map_err(|e| e.to_string())?;
            let d = default_wiring(&s).map_err(|e| e.to_string())?;
            let g = draw(&s, &d).map_err(|e| e.to_string())?;
            ensure(g.height as usize == l - 1, || format!("l={l} seed={seed}: height {}", g.height))?;
            let kappa = level_stats(&d).kappa;
            ensure(g.width as usize == kappa, || format!("l={l} seed={seed}: width {} vs kappa {kappa}", g.width))?;
            let r = g.check();
            ensure(r.is_planar(), || format!("l={l} seed={seed}: {} violations", r.violation_count()))?;
            ensure(row_budget_holds(&g, l), || format!("l={l} seed={seed}: row budget exceeded"))?;
            drawings += 1;
        }
    }
    let mut five = 0;
    let mut widths = HashSet::new();
    for seed in 0..50 {
        let s = recognize(&random_lines(7, seed).map_err(|e| e.to_string())?.graph).map_err(|e| e.to_string())?;
        for cut in valid_cuts(&s) {
            let d = build_wiring(&choose_cut(&s, cut).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let g = draw(&s, &d).map_err(|e| e.to_string())?;
            ensure(g.height == 6, || format!("l=7 seed={seed} cut={cut}: height {}", g.height))?;
            ensure(g.check().is_planar(), || format!("l=7 seed={seed} cut={cut}: not planar"))?;
            widths.insert(g.width);
            five += usize::from(g.width == 5);
        }
    }
    ensure(five > 0, || format!("no 7-line drawing of width 5; widths seen {widths:?}"))?;
    let mut w: Vec<_> = widths.into_iter().collect();
    w.sort_unstable();
    Ok(format!("{drawings} drawings planar at (l-1) x kappa; l=7 height 6, {five} cuts of width 5 (widths {w:?})"))
}

fn area_tracking() -> Outcome {
    let mut worst_width = 0.0f64;
    let mut worst_area = 0.0f64;
    let mut over_cap = Vec::new();
    for l in 10..=60 {
        for seed in 0..2 {
            let s = recognize(&random_lines(l, seed).map_err(|e| e.to_string())?.graph).map_err(|e| e.to_string())?;
            let g = draw(&s, &default_wiring(&s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let (w, n) = (g.width as f64, s.graph.n as f64);
            let l43 = (l as f64).powf(4.0 / 3.0);
            worst_width = worst_width.max(w / l43);
            if w > 2.0 * l43 {
                over_cap.push((l, seed, g.width));
            }
            let area = (g.width * g.height) as f64;
            worst_area = worst_area.max(area / n.powf(7.0 / 6.0));
            ensure(area <= 4.0 * n.powf(7.0 / 6.0), || format!("l={l} seed={seed}: area {area} > 4 n^(7/6)"))?;
        }
    }
    if !over_cap.is_empty() {
        println!("  note: width above 2 l^(4/3) at {over_cap:?}");
    }
    Ok(format!(
        "max width/l^(4/3) = {worst_width:.3}, max area/n^(7/6) = {worst_area:.3}, {} over the width cap",
        over_cap.len()
    ))
}

fn xi_machinery() -> Outcome {
    let listing = [1, 3, 1, 7, 1, 3, 1, 15, 1, 3, 1, 7, 1, 3, 1];
    for (i, &x) in listing.iter().enumerate() {
        ensure(xi(i as u64 + 1) == x, || format!("xi({}) = {}", i + 1, xi(i as u64 + 1)))?;
    }
    let mut sum = 0u64;
    for s in 1..=100_000u64 {
        sum += xi(s);
        let sf = s as f64;
        let lg = sf * sf.log2();
        ensure(lg - 2.0 * sf <= sum as f64 && sum as f64 <= lg + sf, || format!("prefix bound fails at s={s}"))?;
    }
    ensure(sum == xi_prefix_sum(100_000), || "closed-form prefix sum disagrees".into())?;
    let mut drawings = 0;
    for l in 3..=40 {
        for seed in 0..3 {
            let s = recognize(&random_lines(l, seed).map_err(|e| e.to_string())?.graph).map_err(|e| e.to_string())?;
            for cut in valid_cuts(&s) {
                let d = build_wiring(&choose_cut(&s, cut).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let g = draw(&s, &d).map_err(|e| e.to_string())?;
                ensure(row_budget_holds(&g, l), || format!("l={l} seed={seed} cut={cut}: row budget exceeded"))?;
                drawings += 1;
            }
        }
    }
    Ok(format!("listing matches, prefix bounds hold to 1e5, row budget on {drawings} drawings"))
}

fn universality() -> Outcome {
    let mut embedded = 0;
    for l in 3..=15 {
        let ups = universal_points(l, None).map_err(|e| e.to_string())?;
        let s = ups.s as f64;
        let bound = l as f64 * (s * s.log2() + s);
        ensure(ups.total_points() as f64 <= bound, || {
            format!("l={l}: {} points > {bound}", ups.total_points())
        })?;
        for seed in 0..100 {
            let st = recognize(&random_lines(l, seed).map_err(|e| e.to_string())?.graph).map_err(|e| e.to_string())?;
            let g = draw(&st, &default_wiring(&st).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            let (on, _) = embed_on(&g, &ups).map_err(|e| format!("l={l} seed={seed}: {e}"))?;
            ensure(on.positions.iter().all(|&p| ups.contains(p)), || format!("l={l} seed={seed}: off the set"))?;
            ensure(on.check().is_planar(), || format!("l={l} seed={seed}: embedding not planar"))?;
            embedded += 1;
        }
    }
    Ok(format!("{embedded} embeddings planar on the point sets"))
}

fn compositions(s: u64, prefix: &mut Vec<u64>, f: &mut dyn FnMut(&[u64]) -> Result<(), String>) -> Result<(), String> {
    if s == 0 {
        return f(prefix);
    }
    for first in 1..=s {
        prefix.push(first);
        compositions(s - first, prefix, f)?;
        prefix.pop();
    }
    Ok(())
}

fn greedy_matching() -> Outcome {
    let mut count = 0u64;
    for s in 1..=20u64 {
        compositions(s, &mut Vec::new(), &mut |alphas| {
            let m = match_rows(alphas, s as usize).map_err(|e| format!("{alphas:?}: {e}"))?;
            ensure(m.rows.windows(2).all(|w| w[0] < w[1]), || format!("{alphas:?}: rows not increasing"))?;
            ensure(m.rows.iter().zip(alphas).all(|(&r, &a)| xi(r as u64) >= a), || {
                format!("{alphas:?}: row too small")
            })?;
            count += 1;
            Ok(())
        })?;
    }
    ensure(count == (1 << 20) - 1, || format!("{count} sequences"))?;
    Ok(format!("{count} sequences matched"))
}

fn greedy_correctness() -> Outcome {
    let mut runs = 0;
    let mut brute = 0;
    for l in 3..=12 {
        for seed in 0..50 {
            let g = random_lines(l, seed).map_err(|e| e.to_string())?.graph;
            let s = recognize(&g).map_err(|e| e.to_string())?;
            let canon: HashSet<Vec<usize>> = canonical_face_set(&s.faces()).into_iter().collect();
            let r = solve(&g, None).map_err(|e| format!("l={l} seed={seed}: {e}"))?;
            ensure(same_face_set(&r.faces, &s.faces()), || format!("l={l} seed={seed}: face sets differ"))?;
            ensure(r.ears.len() == (l - 1) * (l - 2) / 2 - 1, || {
                format!("l={l} seed={seed}: {} ears", r.ears.len())
            })?;
            for ear in &r.ears {
                ensure(canon.contains(&canonical_face(&ear.face())), || {
                    format!("l={l} seed={seed}: ear {ear:?} is not a face")
                })?;
            }
            for v in 0..g.n {
                let c = shortest_cycle_through(&g, v).map_err(|e| e.to_string())?;
                ensure(canon.contains(&canonical_face(&c)), || {
                    format!("l={l} seed={seed} v={v}: shortest cycle is not a face")
                })?;
                if g.n <= 15 {
                    let all = enumerate_cycles_through(&g, v, g.n).map_err(|e| e.to_string())?;
                    let min = all.iter().map(Vec::len).min().unwrap_or(0);
                    ensure(c.len() == min, || format!("l={l} seed={seed} v={v}: {} vs brute {min}", c.len()))?;
                    brute += 1;
                }
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} solves match the canonical embedding; {brute} cycles confirmed by enumeration"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_arrangeline");
    let run = |args: &[&str], stdin: Option<&str>| -> Result<Vec<u8>, String> {
        use std::io::Write;
        use std::process::Stdio;
        let mut child = Command::new(bin)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| e.to_string())?;
        let mut input = child.stdin.take().expect("piped");
        input.write_all(stdin.unwrap_or("").as_bytes()).map_err(|e| e.to_string())?;
        drop(input);
        let out = child.wait_with_output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))?;
        Ok(out.stdout)
    };
    let mut runs = 0;
    for seed in [0u64, 7, 123_456_789] {
        for level in [1usize, 4, 7] {
            let args = ["generate", "--level", &level.to_string(), "--seed", &seed.to_string()];
            let a = run(&args, None)?;
            ensure(a == run(&args, None)?, || format!("{args:?} differs between runs"))?;
            runs += 2;
            let gen: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
            let graph = gen["graph"].to_string();
            for cmd in [
                &["recognize"][..],
                &["draw"],
                &["draw", "--optimize-cuts"],
                &["draw", "--svg"],
                &["solve-greedy"],
                &["stats"],
            ] {
                let x = run(cmd, Some(&graph))?;
                ensure(x == run(cmd, Some(&graph))?, || format!("{cmd:?} on level {level} seed {seed} differs"))?;
                runs += 2;
            }
        }
    }
    let ups = ["upset", "--l", "12"];
    ensure(run(&ups, None)? == run(&ups, None)?, || "upset differs".into())?;
    runs += 2;
    Ok(format!("{runs} command runs byte-identical"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("recognition round trip", recognition_round_trip),
        ("mutation rejection", mutation_rejection),
        ("grid dimensions and planarity", theorem_two_dimensions),
        ("area tracking", area_tracking),
        ("xi machinery", xi_machinery),
        ("universality at desk scale", universality),
        ("greedy matching completeness", greedy_matching),
        ("greedy embedding correctness", greedy_correctness),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1} s]"),
            Err(why) => {
                println!("FAIL  {name}: {why} [{secs:.1} s]");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
