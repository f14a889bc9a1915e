use std::cmp::Ordering;

use modal_audio::dsp::FeatureCube;
use modal_audio::learner::*;
use modal_audio::logic::{enumerate_intervals, relates, Interval, RelationId};
use modal_audio::logiset::{compute_feature, Atom, FeatureFn, Logiset, Mode, Op};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_logiset(rng: &mut ChaCha8Rng, m: usize, n: usize, t: usize, k: usize, mode: Mode) -> Logiset {
    let names: Vec<String> = (0..n).map(|a| format!("a{a}")).collect();
    let items = (0..m)
        .map(|i| {
            let series = (0..n)
                .map(|_| (0..t).map(|_| rng.gen_range(0..5) as f64).collect())
                .collect();
            (FeatureCube::new(names.clone(), series).unwrap(), i % k)
        })
        .collect();
    let classes = (0..k).map(|c| format!("c{c}")).collect();
    Logiset::build(items, classes, mode).unwrap()
}

// ---- brute-force split oracle -------------------------------------------

fn oracle_key(d: &Decision) -> (RelationId, usize, FeatureFn, Op) {
    (d.relation, d.atom.attr, d.atom.func, d.atom.op)
}

fn oracle_reach(r: RelationId, worlds: &[Interval], len: usize) -> Vec<Interval> {
    let all = enumerate_intervals(len).unwrap();
    if r == RelationId::G {
        return all;
    }
    all.into_iter()
        .filter(|&v| worlds.iter().any(|&w| relates(r, w, v)))
        .collect()
}

fn oracle_best(
    ls: &Logiset,
    indices: &[usize],
    worlds: &[Vec<Interval>],
    space: &CandidateSpace,
) -> Option<(Decision, f64)> {
    let k = ls.n_classes();
    let len = ls.series_len();
    let mut parent = vec![0; k];
    for &i in indices {
        parent[ls.instance(i).label()] += 1;
    }
    let ph = entropy(&parent).unwrap();
    let mut best: Option<(Decision, f64)> = None;
    for &r in &space.relations {
        for &attr in &space.attributes {
            for &func in &space.functions {
                let values: Vec<Vec<f64>> = indices
                    .iter()
                    .zip(worlds)
                    .map(|(&i, ws)| {
                        let s = ls.instance(i).cube().series(attr);
                        oracle_reach(r, ws, len)
                            .into_iter()
                            .map(|v| compute_feature(func, s, v).unwrap())
                            .collect()
                    })
                    .collect();
                let mut ts: Vec<f64> = values.iter().flatten().copied().collect();
                ts.sort_by(f64::total_cmp);
                ts.dedup();
                for op in [Op::Le, Op::Ge] {
                    for &t in &ts {
                        let mut yes = vec![0; k];
                        let mut no = vec![0; k];
                        for (&i, vs) in indices.iter().zip(&values) {
                            let l = ls.instance(i).label();
                            if vs.iter().any(|&v| op.holds(v, t)) {
                                yes[l] += 1;
                            } else {
                                no[l] += 1;
                            }
                        }
                        if yes.iter().sum::<usize>() == 0 || no.iter().sum::<usize>() == 0 {
                            continue;
                        }
                        let gain = split_gain(ph, &yes, &no);
                        let d = Decision::new(r, Atom::new(func, attr, op, t));
                        let wins = match &best {
                            None => true,
                            Some((bd, bg)) => {
                                gain > *bg
                                    || (gain == *bg
                                        && oracle_key(&d)
                                            .cmp(&oracle_key(bd))
                                            .then(t.total_cmp(&bd.atom.threshold))
                                            == Ordering::Less)
                            }
                        };
                        if wins {
                            best = Some((d, gain));
                        }
                    }
                }
            }
        }
    }
    best
}

fn random_state(rng: &mut ChaCha8Rng, router: &Router) -> (InstanceState, Vec<Interval>) {
    let n = router.n_worlds();
    let mut set = WorldSet::empty(n);
    let mut worlds = Vec::new();
    let pick = rng.gen_range(1..=n.min(3));
    for _ in 0..pick {
        let w = rng.gen_range(0..n);
        if !set.contains(w) {
            set.insert(w);
        }
    }
    for w in set.iter() {
        worlds.push(router.world(w));
    }
    (InstanceState { worlds: set }, worlds)
}

#[test]
fn best_split_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let m = rng.gen_range(2..=20);
        let n = rng.gen_range(1..=3);
        let t = rng.gen_range(2..=4);
        let k = rng.gen_range(2..=3);
        let ls = random_logiset(&mut rng, m, n, t, k, Mode::Modal);
        let router = Router::new(Mode::Modal, t).unwrap();
        let indices: Vec<usize> = (0..m).collect();
        let at_root = case % 3 == 0;
        let (states, worlds): (Vec<_>, Vec<_>) = if at_root {
            let all = enumerate_intervals(t).unwrap();
            (0..m).map(|_| (router.initial_state(), all.clone())).unzip()
        } else {
            (0..m).map(|_| random_state(&mut rng, &router)).unzip()
        };
        let space = CandidateSpace {
            relations: if at_root { vec![RelationId::G] } else { RelationId::ALL.to_vec() },
            functions: FeatureFn::ALL.to_vec(),
            attributes: (0..n).collect(),
        };
        let got = best_split(&ls, &router, &indices, &states, &space).unwrap();
        let want = oracle_best(&ls, &indices, &worlds, &space);
        match (got, want) {
            (None, None) => {}
            (Some(g), Some((d, gain))) => {
                assert_eq!(g.gain, gain, "case {case}");
                assert_eq!(g.decision, d, "case {case}");
            }
            (g, w) => panic!("case {case}: {g:?} vs {w:?}"),
        }
    }
}

#[test]
fn split_edge_cases() {
    let names = vec!["A".to_string()];
    let cube = |xs: Vec<f64>| FeatureCube::new(names.clone(), vec![xs]).unwrap();
    let classes = vec!["n".to_string(), "p".to_string()];
    let ls = Logiset::build(
        vec![(cube(vec![0.2, 0.1]), 0), (cube(vec![0.9, 0.8]), 1), (cube(vec![0.1, 0.3]), 0), (cube(vec![0.7, 0.6]), 1)],
        classes.clone(),
        Mode::Propositional,
    )
    .unwrap();
    let router = Router::new(Mode::Propositional, 2).unwrap();
    let idx = [0, 1, 2, 3];
    let states = vec![router.initial_state(); 4];
    let space = CandidateSpace {
        relations: vec![RelationId::Id],
        functions: vec![FeatureFn::Mean],
        attributes: vec![0],
    };
    let s = best_split(&ls, &router, &idx, &states, &space).unwrap().unwrap();
    assert_eq!(s.gain, 1.0);
    assert_eq!(s.decision.relation, RelationId::Id);
    // Le sorts before Ge; `mean <= 0.2` is the first perfect split.
    assert_eq!(s.decision.atom, Atom::new(FeatureFn::Mean, 0, Op::Le, 0.2));

    // pure node
    assert!(best_split(&ls, &router, &[0, 2], &states[..2], &space).unwrap().is_none());

    // identical instances, different labels
    let twin = Logiset::build(vec![(cube(vec![1.0, 2.0]), 0), (cube(vec![1.0, 2.0]), 1)], classes, Mode::Modal).unwrap();
    let router = Router::new(Mode::Modal, 2).unwrap();
    let full = CandidateSpace {
        relations: RelationId::ALL.to_vec(),
        functions: FeatureFn::ALL.to_vec(),
        attributes: vec![0],
    };
    let st = vec![router.initial_state(); 2];
    assert!(best_split(&twin, &router, &[0, 1], &st, &full).unwrap().is_none());
}

// ---- propositional reduction --------------------------------------------

fn tabular_tree(rows: &[(Vec<f64>, usize)], idx: &[usize], n_attr: usize, k: usize, p: &LearnParams) -> TreeNode {
    let mut hist = vec![0; k];
    for &i in idx {
        hist[rows[i].1] += 1;
    }
    if entropy(&hist).unwrap() <= p.max_leaf_entropy {
        return TreeNode::leaf(hist);
    }
    let ph = entropy(&hist).unwrap();
    let mut best: Option<(usize, FeatureFn, Op, f64, f64)> = None;
    for attr in 0..n_attr {
        for (fi, &func) in FeatureFn::ALL.iter().enumerate() {
            let col = |i: usize| rows[i].0[fi * n_attr + attr];
            let mut ts: Vec<f64> = idx.iter().map(|&i| col(i)).collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            for op in [Op::Le, Op::Ge] {
                for &t in &ts {
                    let (mut yes, mut no) = (vec![0; k], vec![0; k]);
                    for &i in idx {
                        if op.holds(col(i), t) {
                            yes[rows[i].1] += 1
                        } else {
                            no[rows[i].1] += 1
                        }
                    }
                    if yes.iter().sum::<usize>() == 0 || no.iter().sum::<usize>() == 0 {
                        continue;
                    }
                    let g = split_gain(ph, &yes, &no);
                    if best.is_none_or(|b| g > b.4) {
                        best = Some((attr, func, op, t, g));
                    }
                }
            }
        }
    }
    match best {
        Some((attr, func, op, t, g)) if g >= p.min_gain => {
            let fi = FeatureFn::ALL.iter().position(|&f| f == func).unwrap();
            let (l, r): (Vec<usize>, Vec<usize>) =
                idx.iter().partition(|&&i| op.holds(rows[i].0[fi * n_attr + attr], t));
            TreeNode::Split {
                decision: Decision::new(RelationId::Id, Atom::new(func, attr, op, t)),
                left: Box::new(tabular_tree(rows, &l, n_attr, k, p)),
                right: Box::new(tabular_tree(rows, &r, n_attr, k, p)),
            }
        }
        _ => TreeNode::leaf(hist),
    }
}

#[test]
fn propositional_trees_equal_tabular_learner() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..20 {
        let m = rng.gen_range(10..=40);
        let n = rng.gen_range(1..=3);
        let t = rng.gen_range(3..=8);
        let k = rng.gen_range(2..=3);
        let ls = random_logiset(&mut rng, m, n, t, k, Mode::Propositional);
        let params = LearnParams {
            mode: Mode::Propositional,
            max_leaf_entropy: if case % 2 == 0 { 0.6 } else { 0.0 },
            ..LearnParams::default()
        };
        let rows: Vec<(Vec<f64>, usize)> = ls
            .instances()
            .iter()
            .map(|inst| {
                let mut row = Vec::new();
                for f in FeatureFn::ALL {
                    for a in 0..n {
                        row.push(f.apply(inst.cube().series(a)));
                    }
                }
                (row, inst.label())
            })
            .collect();
        let want = tabular_tree(&rows, &(0..m).collect::<Vec<_>>(), n, k, &params);
        let got = learn_tree(&ls, &params).unwrap();
        assert_eq!(got, want, "case {case}");
    }
}

// ---- structural properties ---------------------------------------------

fn check_node(
    ls: &Logiset,
    router: &Router,
    node: &TreeNode,
    items: Vec<(usize, InstanceState)>,
    params: &LearnParams,
    at_root: bool,
) {
    let mut hist = vec![0; ls.n_classes()];
    for (i, _) in &items {
        hist[ls.instance(*i).label()] += 1;
    }
    match node {
        TreeNode::Leaf { histogram, class } => {
            assert_eq!(histogram, &hist);
            assert_eq!(*class, majority(&hist));
        }
        TreeNode::Split { decision, left, right } => {
            if ls.mode() == Mode::Modal && at_root {
                assert_eq!(decision.relation, RelationId::G);
            }
            let ph = entropy(&hist).unwrap();
            assert!(ph > params.max_leaf_entropy);
            let (mut l, mut r) = (Vec::new(), Vec::new());
            for (i, s) in items {
                let (ok, next) = router.apply_decision(decision, ls.instance(i), &s).unwrap();
                if ok {
                    assert!(!next.worlds.is_empty());
                    l.push((i, next));
                } else {
                    assert_eq!(next, s);
                    r.push((i, next));
                }
            }
            let count = |v: &[(usize, InstanceState)]| {
                let mut h = vec![0; ls.n_classes()];
                for (i, _) in v {
                    h[ls.instance(*i).label()] += 1;
                }
                h
            };
            let (hl, hr) = (count(&l), count(&r));
            let (nl, nr) = (l.len() as f64, r.len() as f64);
            let child = (nl * entropy(&hl).unwrap() + nr * entropy(&hr).unwrap()) / (nl + nr);
            assert!(child <= ph + 1e-12, "weighted child entropy exceeds parent");
            let gain = split_gain(ph, &hl, &hr);
            assert!((0.0..=ph).contains(&gain) && gain >= params.min_gain);
            check_node(ls, router, left, l, params, false);
            check_node(ls, router, right, r, params, false);
        }
    }
}

#[test]
fn trees_are_sound_and_respect_pruning() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..12 {
        let mode = if case % 2 == 0 { Mode::Modal } else { Mode::Propositional };
        let t = rng.gen_range(3..=6);
        let ls = random_logiset(&mut rng, 30, 2, t, 2, mode);
        let params = LearnParams {
            mode,
            ..LearnParams::default()
        };
        let tree = learn_tree(&ls, &params).unwrap();
        let router = Router::new(mode, t).unwrap();
        let items = (0..ls.len()).map(|i| (i, router.initial_state())).collect();
        check_node(&ls, &router, &tree, items, &params, true);
        for i in 0..ls.len() {
            let r = route(&tree, &router, ls.instance(i)).unwrap();
            assert_eq!(r.path.len() <= tree.depth(), true);
            assert_eq!(r.class, predict_tree(&tree, &router, ls.instance(i)).unwrap());
        }
    }
}

#[test]
fn full_growth_fits_training_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ls = random_logiset(&mut rng, 25, 3, 5, 3, Mode::Modal);
    let params = LearnParams {
        min_gain: 0.0,
        max_leaf_entropy: 0.0,
        ..LearnParams::default()
    };
    let tree = learn_tree(&ls, &params).unwrap();
    let router = Router::new(Mode::Modal, 5).unwrap();
    for inst in ls.instances() {
        assert_eq!(predict_tree(&tree, &router, inst).unwrap(), inst.label());
    }
}

#[test]
fn simple_trees() {
    let names = vec!["A".to_string()];
    let cube = |v: f64| FeatureCube::new(names.clone(), vec![vec![v, v + 0.1, v]]).unwrap();
    let classes = vec!["lo".to_string(), "hi".to_string()];
    let items = (0..10).map(|i| (cube(i as f64), usize::from(i >= 5))).collect();
    let ls = Logiset::build(items, classes.clone(), Mode::Propositional).unwrap();
    let params = LearnParams {
        mode: Mode::Propositional,
        ..LearnParams::default()
    };
    let tree = learn_tree(&ls, &params).unwrap();
    assert_eq!(tree.n_leaves(), 2);
    let router = Router::new(Mode::Propositional, 3).unwrap();
    for inst in ls.instances() {
        assert_eq!(predict_tree(&tree, &router, inst).unwrap(), inst.label());
    }

    let single = Logiset::build((0..4).map(|i| (cube(i as f64), 1)).collect(), classes, Mode::Modal).unwrap();
    let leaf = learn_tree(&single, &LearnParams::default()).unwrap();
    assert_eq!(leaf, TreeNode::Leaf { class: 1, histogram: vec![0, 4] });
    let router = Router::new(Mode::Modal, 3).unwrap();
    assert_eq!(predict_tree(&leaf, &router, single.instance(0)).unwrap(), 1);
}

#[test]
fn params_validation() {
    let bad = LearnParams {
        attr_frac: 0.0,
        ..LearnParams::default()
    };
    assert!(bad.validate().is_err());
    let bad = LearnParams {
        min_gain: -0.1,
        ..LearnParams::default()
    };
    assert!(bad.validate().is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let ls = random_logiset(&mut rng, 4, 1, 3, 2, Mode::Modal);
    let wrong_mode = LearnParams {
        mode: Mode::Propositional,
        ..LearnParams::default()
    };
    assert!(learn_tree(&ls, &wrong_mode).is_err());
}

// ---- forests and models ------------------------------------------------

#[test]
fn forest_sampling_sizes() {
    assert_eq!(sample_size(0.7, 10), 7);
    assert_eq!(sample_size(0.5, 77), 39);
    assert_eq!(sample_size(1.0, 3), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ls = random_logiset(&mut rng, 10, 77, 3, 2, Mode::Propositional);
    let params = LearnParams {
        mode: Mode::Propositional,
        n_trees: 100,
        seed: 42,
        ..LearnParams::default()
    };
    let f = learn_forest(&ls, &params).unwrap();
    assert_eq!(f.trees.len(), 100);
    for t in &f.trees {
        assert_eq!(t.attributes.len(), 39);
        assert!(t.attributes.windows(2).all(|w| w[0] < w[1]));
        for d in t.root.decisions() {
            assert!(t.attributes.contains(&d.atom.attr));
        }
        let total: usize = t.root.leaves().iter().map(|l| match l {
            TreeNode::Leaf { histogram, .. } => histogram.iter().sum::<usize>(),
            _ => unreachable!(),
        }).sum();
        assert_eq!(total, 7);
    }
}

#[test]
fn forest_votes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ls = random_logiset(&mut rng, 6, 1, 3, 2, Mode::Modal);
    let router = Router::new(Mode::Modal, 3).unwrap();
    let leaf = |c: usize| ForestTree {
        attributes: vec![0],
        root: TreeNode::Leaf { class: c, histogram: if c == 0 { vec![1, 0] } else { vec![0, 1] } },
    };
    let tie = Forest { trees: vec![leaf(1), leaf(0)], seed: 0 };
    assert_eq!(predict_forest(&tie, &router, ls.instance(0), 2).unwrap(), 0);
    let agree = Forest { trees: vec![leaf(1), leaf(1), leaf(0)], seed: 0 };
    assert_eq!(predict_forest(&agree, &router, ls.instance(0), 2).unwrap(), 1);

    let params = LearnParams { n_trees: 1, seed: 4, ..LearnParams::default() };
    let f = learn_forest(&ls, &params).unwrap();
    for inst in ls.instances() {
        assert_eq!(
            predict_forest(&f, &router, inst, 2).unwrap(),
            predict_tree(&f.trees[0].root, &router, inst).unwrap()
        );
    }
}

#[test]
fn model_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (kind, mode) in [
        (ModelKind::Tree, Mode::Modal),
        (ModelKind::Tree, Mode::Propositional),
        (ModelKind::Forest, Mode::Modal),
    ] {
        let ls = random_logiset(&mut rng, 20, 3, 4, 2, mode);
        let params = LearnParams { mode, n_trees: 5, seed: 9, ..LearnParams::default() };
        let model = Model::train(&ls, &params, kind).unwrap();
        let text = model.to_json().unwrap();
        let back = Model::from_json(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_json().unwrap(), text);
        let idx: Vec<usize> = (0..ls.len()).collect();
        assert_eq!(back.predict_logiset(&ls, &idx).unwrap(), model.predict_logiset(&ls, &idx).unwrap());
        assert_eq!(
            model.predict_cube(ls.instance(3).cube()).unwrap(),
            model.predict_logiset(&ls, &[3]).unwrap()[0]
        );
    }
    assert!(Model::from_json("{}").is_err());
}

#[test]
fn model_json_shape() {
    let names = vec!["A".to_string()];
    let cube = |v: f64| FeatureCube::new(names.clone(), vec![vec![v, v]]).unwrap();
    let ls = Logiset::build(
        vec![(cube(0.0), 0), (cube(1.0), 1), (cube(0.5), 0), (cube(2.0), 1)],
        vec!["no".into(), "yes".into()],
        Mode::Modal,
    )
    .unwrap();
    let model = Model::train(&ls, &LearnParams::default(), ModelKind::Tree).unwrap();
    let v: serde_json::Value = serde_json::from_str(&model.to_json().unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "tree");
    assert_eq!(v["mode"], "modal");
    let d = &v["tree"]["decision"];
    assert_eq!(d["relation"], "G");
    assert_eq!(d["attr_name"], "A");
    assert!(d["fn"].is_string() && d["op"].is_string() && d["threshold"].is_number());
    assert!(v["tree"]["left"]["leaf"].is_string());
    assert!(v["tree"]["left"]["histogram"].is_array());
}

#[test]
fn schema_mismatch_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ls = random_logiset(&mut rng, 8, 2, 4, 2, Mode::Modal);
    let model = Model::train(&ls, &LearnParams::default(), ModelKind::Tree).unwrap();
    let other = FeatureCube::new(vec!["x".into(), "y".into()], vec![vec![0.0; 4], vec![0.0; 4]]).unwrap();
    assert!(model.predict_cube(&other).is_err());
    let short = FeatureCube::new(vec!["a0".into(), "a1".into()], vec![vec![0.0; 3], vec![0.0; 3]]).unwrap();
    assert!(model.predict_cube(&short).is_err());
}

#[cfg(feature = "parallel")]
#[test]
fn forest_bytes_independent_of_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ls = random_logiset(&mut rng, 30, 4, 5, 3, Mode::Modal);
    let params = LearnParams { n_trees: 12, seed: 7, ..LearnParams::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| Model::train(&ls, &params, ModelKind::Forest).unwrap().to_json().unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}
