//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Every criterion is exact (no numeric tolerance); the time budget each
//! one must meet is pinned next to it.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bourbaki_core::constructions::{
    fixed_point_bourbaki, fixed_point_moroianu, inclusion_preorder, kanamori_construct,
    kuratowski_fixed_point, non_injectivity_witness, zermelo_well_order, ChoiceFunction, FixMode,
    HypothesisPolicy,
};
use bourbaki_core::equivalence::{
    choice_from_well_order, kneser_maximal, round_trip, zorn_maximal,
};
use bourbaki_core::oracle::{
    all_fixed_points, all_maximal, all_sequences, count_preorders_by_rows, enumerate_preorders,
    tb_uniqueness_oracle, union_closed_families, InstanceGenerator,
};
use bourbaki_core::{construct_m, Chain, Preorder, Subset, DEFAULT_EXHAUSTIVE_BOUND};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn segments(p: &Preorder) -> Vec<Subset> {
    Subset::all(p.len()).filter(|s| p.is_segment(s)).collect()
}

fn choice_rules() -> [ChoiceFunction; 5] {
    [
        ChoiceFunction::MinIndex,
        ChoiceFunction::MaxIndex,
        ChoiceFunction::Seeded(1),
        ChoiceFunction::Seeded(2),
        ChoiceFunction::Seeded(3),
    ]
}

fn tb_uniqueness() -> Outcome {
    const SPECS_PER_N: usize = 1000;
    let mut gen = InstanceGenerator::new(0x7b);
    let mut nonempty = 0;
    for n in 2..=4 {
        for i in 0..SPECS_PER_N {
            let spec = gen.phi_spec(n);
            let built = construct_m(n, &spec).map_err(|e| format!("n={n} #{i}: {e}"))?;
            let unique = tb_uniqueness_oracle(n, &spec).map_err(|e| format!("n={n} #{i}: {e}"))?;
            ensure(built.all_pass(), || {
                format!("n={n} #{i}: witness checks failed")
            })?;
            ensure(unique == built.m, || {
                format!("n={n} #{i}: oracle {unique} vs construction {}", built.m)
            })?;
            nonempty += usize::from(!built.m.is_empty());
        }
    }
    Ok(format!(
        "3x{SPECS_PER_N} specs, unique survivor matched ({nonempty} non-empty M)"
    ))
}

fn segment_algebra() -> Outcome {
    let preorders = enumerate_preorders(4).map_err(|e| e.to_string())?;
    ensure(preorders.len() == 355, || {
        format!("{} preorders", preorders.len())
    })?;
    let mut pairs = 0usize;
    let mut nested = 0usize;
    for (k, p) in preorders.iter().enumerate() {
        let segs = segments(p);
        for s in &segs {
            for t in &segs {
                pairs += 1;
                ensure(p.is_segment(&s.union(t)), || {
                    format!("preorder {k}: {s} u {t}")
                })?;
                ensure(p.is_segment(&s.intersection(t)), || {
                    format!("preorder {k}: {s} n {t}")
                })?;
            }
            let (sub, back) = p.restrict(s);
            for inner in Subset::all(sub.len()).filter(|x| sub.is_segment(x)) {
                nested += 1;
                let lifted = Subset::from_elements(p.len(), inner.iter().map(|i| back[i]));
                ensure(p.is_segment(&lifted), || {
                    format!("preorder {k}: {lifted} in {s}")
                })?;
            }
        }
        for a in 0..p.len() {
            ensure(p.is_segment(&p.initial_segment(a)), || {
                format!("preorder {k}: <{a}")
            })?;
        }
    }
    Ok(format!(
        "355 preorders, {pairs} segment pairs, {nested} nested segments"
    ))
}

fn zermelo() -> Outcome {
    let mut gen = InstanceGenerator::new(0x3e);
    for n in 1..=6 {
        for i in 0..100 {
            let c = gen.choice_table(n);
            let w = zermelo_well_order(n, &c).map_err(|e| format!("n={n} #{i}: {e}"))?;
            let mut sorted = w.clone().into_vec();
            sorted.sort_unstable();
            ensure(sorted == (0..n).collect::<Vec<_>>(), || {
                format!("n={n} #{i}: {w} not a permutation")
            })?;
            for k in 0..n {
                let rest = w.prefix(k).to_subset(n).complement();
                let expected = c.choose(&rest).map_err(|e| e.to_string())?;
                ensure(w.as_slice()[k] == expected, || {
                    format!("n={n} #{i}: position {k}")
                })?;
            }
        }
    }
    Ok("n=1..6, 100 choice tables each".into())
}

fn kanamori() -> Outcome {
    let mut gen = InstanceGenerator::new(0x4a);
    for n in 1..=4 {
        for i in 0..1000 {
            let psi = gen.psi(n);
            let w = kanamori_construct(&psi).map_err(|e| format!("n={n} #{i}: {e}"))?;
            for (k, x) in w.m.iter().enumerate() {
                ensure(psi.get(&w.m.prefix(k).to_subset(n)) == x, || {
                    format!("n={n} #{i}: position {k}")
                })?;
            }
            let set_m = w.m.to_subset(n);
            ensure(set_m.contains(psi.get(&set_m)), || {
                format!("n={n} #{i}: psi(M) not in M")
            })?;
            let (a, b) = non_injectivity_witness(&psi);
            ensure(a != b && a.is_subset(&b), || {
                format!("n={n} #{i}: {a} not strictly inside {b}")
            })?;
            ensure(psi.get(&a) == psi.get(&b), || {
                format!("n={n} #{i}: psi differs on {a}, {b}")
            })?;
        }
    }
    Ok("n=1..4, 1000 psi each".into())
}

fn bourbaki_moroianu() -> Outcome {
    const MAPS: usize = 20;
    let preorders = enumerate_preorders(4).map_err(|e| e.to_string())?;
    let mut gen = InstanceGenerator::new(0x5b);
    let rules = choice_rules();
    let (mut case1, mut case2, mut exact) = (0usize, 0usize, 0usize);
    for (k, p) in preorders.iter().enumerate() {
        let antisym = p.is_antisymmetric();
        // Case 2 needs a least upper bound for the empty chain: a minimum.
        let has_lubs = !p.least_upper_bounds(&Subset::empty(4)).is_empty();
        for j in 0..MAPS {
            let f = gen.inflationary(p);
            let fixed = all_fixed_points(p, f.as_slice()).map_err(|e| e.to_string())?;
            let c = &rules[j % rules.len()];
            for a in 0..p.len() {
                let mut results = vec![(1, fixed_point_moroianu(p, &f, c, a))];
                if has_lubs {
                    results.push((2, fixed_point_bourbaki(p, &f, a)));
                }
                for (case, r) in results {
                    let w =
                        r.map_err(|e| format!("preorder {k}, map {j}, a={a}, case {case}: {e}"))?;
                    let b = w.b;
                    let tag = || format!("preorder {k}, map {j}, a={a}, case {case}, b={b}");
                    ensure(w.all_pass(), || format!("{}: witness checks failed", tag()))?;
                    ensure(p.equivalent(f.apply(b), b), || {
                        format!("{}: f(b) not equivalent to b", tag())
                    })?;
                    ensure(p.leq(a, b), || format!("{}: b not above a", tag()))?;
                    if antisym {
                        ensure(w.mode == FixMode::Exact && fixed.contains(b), || {
                            format!("{}: not exact", tag())
                        })?;
                        exact += 1;
                    }
                    if case == 1 {
                        case1 += 1;
                    } else {
                        case2 += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{case1} case-1 runs, {case2} case-2 runs, {exact} exact on antisymmetric carriers"
    ))
}

fn kuratowski() -> Outcome {
    const MAPS: usize = 20;
    let families = union_closed_families(3).map_err(|e| e.to_string())?;
    let mut gen = InstanceGenerator::new(0x6c);
    for (k, family) in families.iter().enumerate() {
        let p = inclusion_preorder(family);
        for j in 0..MAPS {
            let f = gen.inflationary(&p);
            let w = kuratowski_fixed_point(3, family, f.as_slice())
                .map_err(|e| format!("family {k}: {e}"))?;
            ensure(f.apply(w.fixed) == w.fixed, || {
                format!("family {k}, map {j}: f(F) != F")
            })?;
            ensure(family[w.start].is_subset(&w.member), || {
                format!("family {k}, map {j}: F misses start")
            })?;
            ensure(w.all_pass(), || {
                format!("family {k}, map {j}: witness checks failed")
            })?;
        }
    }
    Ok(format!(
        "{} union-closed families on 3 points, {MAPS} maps each",
        families.len()
    ))
}

fn kneser_zorn() -> Outcome {
    let preorders = enumerate_preorders(4).map_err(|e| e.to_string())?;
    let (mut kneser_runs, mut zorn_runs) = (0usize, 0usize);
    for (k, p) in preorders.iter().enumerate() {
        let maximal = all_maximal(p).map_err(|e| e.to_string())?;
        let inductive = p
            .is_inductive(DEFAULT_EXHAUSTIVE_BOUND)
            .map_err(|e| e.to_string())?;
        for c in choice_rules() {
            let w = kneser_maximal(p, &c).map_err(|e| format!("preorder {k}, {c}: {e}"))?;
            ensure(maximal.contains(w.element), || {
                format!("preorder {k}, {c}: Kneser gave {}", w.element)
            })?;
            kneser_runs += 1;
            if inductive {
                let z = zorn_maximal(p, &c, DEFAULT_EXHAUSTIVE_BOUND)
                    .map_err(|e| format!("preorder {k}: {e}"))?;
                ensure(maximal.contains(z.element), || {
                    format!("preorder {k}, {c}: Zorn gave {}", z.element)
                })?;
                zorn_runs += 1;
            }
        }
    }
    Ok(format!("{kneser_runs} Kneser runs, {zorn_runs} Zorn runs"))
}

fn equivalence_round_trip() -> Outcome {
    for base_n in 1..=3 {
        for seed in 0..10 {
            let cert = round_trip(base_n, &ChoiceFunction::Seeded(seed))
                .map_err(|e| format!("base_n={base_n}, seed={seed}: {e}"))?;
            ensure(cert.final_, || {
                format!("base_n={base_n}, seed={seed}: certificate not final")
            })?;
        }
    }
    let mut laws = 0usize;
    for n in 0..=5 {
        for seq in all_sequences(n).into_iter().filter(|s| s.len() == n) {
            let w = Chain::new(seq).map_err(|e| e.to_string())?;
            let c = choice_from_well_order(&w, n).map_err(|e| e.to_string())?;
            let replay = zermelo_well_order(n, &c).map_err(|e| e.to_string())?;
            ensure(replay == w, || format!("replay {replay} != {w}"))?;
            laws += 1;
        }
    }
    Ok(format!(
        "30 certificates final, {laws} well-orderings reproduced"
    ))
}

fn preorder_counts() -> Outcome {
    let mut by_filter = Vec::new();
    let mut by_rows = Vec::new();
    for n in 1..=4 {
        let all = enumerate_preorders(n).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<Vec<Vec<bool>>> = all.iter().map(|p| p.matrix()).collect();
        ensure(distinct.len() == all.len(), || format!("n={n}: duplicates"))?;
        by_filter.push(all.len());
        by_rows.push(count_preorders_by_rows(n).map_err(|e| e.to_string())?);
    }
    ensure(by_filter == [1, 4, 29, 355], || {
        format!("filter counts {by_filter:?}")
    })?;
    ensure(by_rows == by_filter, || format!("row counts {by_rows:?}"))?;
    Ok(format!("{by_filter:?} from both filters"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "segment recursion uniqueness",
            budget: Duration::from_secs(30),
            run: tb_uniqueness,
        },
        Criterion {
            id: 2,
            name: "segment algebra",
            budget: Duration::from_secs(10),
            run: segment_algebra,
        },
        Criterion {
            id: 3,
            name: "Zermelo well-ordering",
            budget: Duration::from_secs(5),
            run: zermelo,
        },
        Criterion {
            id: 4,
            name: "Kanamori + non-injectivity",
            budget: Duration::from_secs(10),
            run: kanamori,
        },
        Criterion {
            id: 5,
            name: "Bourbaki/Moroianu fixed points",
            budget: Duration::from_secs(60),
            run: bourbaki_moroianu,
        },
        Criterion {
            id: 6,
            name: "Kuratowski fixed points",
            budget: Duration::from_secs(30),
            run: kuratowski,
        },
        Criterion {
            id: 7,
            name: "Kneser/Zorn maximality",
            budget: Duration::from_secs(30),
            run: kneser_zorn,
        },
        Criterion {
            id: 8,
            name: "equivalence round trip",
            budget: Duration::from_secs(60),
            run: equivalence_round_trip,
        },
        Criterion {
            id: 9,
            name: "preorder enumeration",
            budget: Duration::from_secs(10),
            run: preorder_counts,
        },
    ];
    // Default hypothesis policy must scan 4-element carriers exhaustively.
    assert!(HypothesisPolicy::default().exhaustive_bound >= 4);

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => (
                "FAIL",
                format!("{d}; took {elapsed:.2?}, budget {:?}", c.budget),
            ),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] AC{} {} ({elapsed:.2?}): {detail}", c.id, c.name);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
