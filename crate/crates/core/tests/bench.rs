use seqbench::bench::algos::{self, Deadline, End, Increment, Search};
use seqbench::bench::{
    check_admissible, model_peak_bytes, run_bench, BenchId, BenchSpec, ALLOWED_K,
};
use seqbench::{new_sequence, Prng, Sequence, StructureId};

fn fresh(id: StructureId) -> Box<dyn Sequence + Send> {
    new_sequence(id, 64).unwrap()
}

fn checksum(bench: BenchId, id: StructureId, n: usize, k: Option<u64>, seed: u64) -> u64 {
    let mut spec = BenchSpec::new(bench, id, n)
        .with_seed(seed)
        .with_repeats(1)
        .with_block_capacity(64);
    spec.k = k;
    run_bench(&spec).unwrap().checksum
}

#[test]
fn stroustrup_checksums_agree_with_oracle() {
    let want = checksum(BenchId::Stroustrup, StructureId::Oracle, 1000, None, 42);
    for id in StructureId::STUDIED {
        assert_eq!(
            checksum(BenchId::Stroustrup, id, 1000, None, 42),
            want,
            "{id}"
        );
        assert_eq!(
            checksum(BenchId::StroustrupBinary, id, 1000, None, 42),
            want,
            "{id} binary"
        );
    }
}

#[test]
fn every_bench_agrees_across_admitted_structures() {
    for bench in BenchId::ALL {
        let ks: Vec<Option<u64>> = if bench.uses_k() {
            ALLOWED_K.map(Some).to_vec()
        } else {
            vec![None]
        };
        for k in ks {
            for seed in [1, 2] {
                let sums: Vec<(StructureId, u64)> = StructureId::ALL
                    .into_iter()
                    .filter(|&id| check_admissible(bench, id, 3000).is_ok())
                    .map(|id| (id, checksum(bench, id, 3000, k, seed)))
                    .collect();
                assert!(sums.len() >= 4, "{bench}");
                assert!(
                    sums.iter().all(|&(_, c)| c == sums[0].1),
                    "{bench} k={k:?} seed={seed}: {sums:?}"
                );
            }
        }
    }
}

#[test]
fn fairbench_checksum_is_triangular_for_every_increment() {
    let n = 5000usize;
    let want = (n * (n + 1) / 2) as u64;
    assert_eq!(
        checksum(BenchId::Fairbench, StructureId::ArrayBlock, n, None, 1),
        want
    );
    for k in ALLOWED_K {
        for id in [
            StructureId::LinkedList,
            StructureId::ArrayBlock,
            StructureId::ArrayRing,
        ] {
            assert_eq!(
                checksum(BenchId::FairbenchRand, id, n, Some(k), 9),
                want,
                "{id} k={k}"
            );
        }
    }
}

#[test]
fn endgame_checksums_are_sums_of_drawn_values() {
    let n = 2000;
    let mut rng = Prng::new(5);
    let want = (0..n).fold(0u64, |acc, _| acc.wrapping_add(rng.value62() as u64));
    for bench in [BenchId::AddLast, BenchId::AddFirst] {
        for id in StructureId::STUDIED {
            if check_admissible(bench, id, n).is_ok() {
                assert_eq!(checksum(bench, id, n, None, 5), want, "{bench}/{id}");
            }
        }
    }
}

#[test]
fn sorted_after_insertions_at_ten_checkpoints() {
    let n = 2000;
    for search in [Search::Linear, Search::Binary] {
        for id in StructureId::ALL {
            let mut seq = fresh(id);
            let mut rng = Prng::new(77);
            for i in 1..=n {
                algos::sorted_insert_step(seq.as_mut(), &mut rng, search).unwrap();
                if i % (n / 10) == 0 {
                    let v = seq.to_vec();
                    assert_eq!(v.len(), i);
                    assert!(
                        v.windows(2).all(|w| w[0] <= w[1]),
                        "{id} {search:?} after {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn every_bench_leaves_the_list_empty() {
    let n = 1500;
    for id in StructureId::ALL {
        let run = |f: &dyn Fn(&mut dyn Sequence, &mut Prng) -> u64| {
            let mut seq = fresh(id);
            f(seq.as_mut(), &mut Prng::new(3));
            assert_eq!(seq.size(), 0, "{id}");
            assert!(seq.to_vec().is_empty(), "{id}");
        };
        run(&|s, r| {
            algos::stroustrup(s, n, r, Search::Linear, Deadline::NONE)
                .unwrap()
                .checksum
        });
        run(&|s, r| {
            algos::stroustrup(s, n, r, Search::Binary, Deadline::NONE)
                .unwrap()
                .checksum
        });
        run(&|s, r| {
            algos::fairbench(s, n, r, Increment::Unit, Deadline::NONE)
                .unwrap()
                .checksum
        });
        run(&|s, r| {
            algos::fairbench(s, n, r, Increment::Random(128), Deadline::NONE)
                .unwrap()
                .checksum
        });
        run(&|s, r| {
            algos::endgame(s, n, r, End::First, Deadline::NONE)
                .unwrap()
                .checksum
        });
        run(&|s, r| {
            algos::endgame(s, n, r, End::Last, Deadline::NONE)
                .unwrap()
                .checksum
        });
    }
}

#[test]
fn checksum_depends_only_on_inputs() {
    let a = checksum(BenchId::Stroustrup, StructureId::ArrayRing, 3000, None, 11);
    let b = checksum(BenchId::Stroustrup, StructureId::LinkedList, 3000, None, 11);
    let c = checksum(BenchId::Stroustrup, StructureId::ArrayRing, 3000, None, 12);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let spec =
        BenchSpec::new(BenchId::FairbenchRand, StructureId::ArrayBlock, 4000).with_repeats(3);
    let r1 = run_bench(&spec).unwrap();
    let r2 = run_bench(&spec).unwrap();
    assert_eq!((r1.checksum, r1.model_bytes), (r2.checksum, r2.model_bytes));
}

#[test]
fn peak_model_bounds_measured_peak() {
    let mut cases: Vec<(StructureId, usize)> =
        StructureId::ALL.iter().map(|&id| (id, 2048)).collect();
    cases.extend([(StructureId::ArrayBlock, 4), (StructureId::ArrayBlock, 64)]);
    for (id, b) in cases {
        for bench in BenchId::ALL {
            let n = 3000;
            if check_admissible(bench, id, n).is_err() {
                continue;
            }
            let spec = BenchSpec::new(bench, id, n)
                .with_repeats(1)
                .with_block_capacity(b);
            let r = run_bench(&spec).unwrap();
            assert!(
                r.model_bytes as u128 <= model_peak_bytes(id, n, b),
                "{bench}/{id} B={b}: {} > {}",
                r.model_bytes,
                model_peak_bytes(id, n, b)
            );
        }
    }
}
