use std::collections::BTreeSet;

use hcoa_core::classifiers::{generate_dataset, knn_features, label_from_path, Dataset, DiskSpec};
use hcoa_core::oracle::{exact_optimum, weights_match};
use hcoa_core::scenario::{gen_hier_hsg, road_grass_river, verify_tree_rooms, HierParams};
use hcoa_core::{
    coa_star, euclidean_to, hcoa_star, Class, CoaConfig, Graph, HcoaConfig, Hsg, KnnClassifier, LayerGraph,
    MajorityClass, TableClassifier, TieBreak,
};

fn small_building(seed: u64) -> Hsg {
    gen_hier_hsg(&HierParams { rooms: 6, nodes_per_room: 12, ..Default::default() }, seed).unwrap()
}

#[test]
fn dataset_is_reproducible_and_round_trips() {
    let hsg = small_building(3);
    let a = generate_dataset(&hsg, 1, 8, &DiskSpec::default(), 42).unwrap();
    let b = generate_dataset(&hsg, 1, 8, &DiskSpec::default(), 42).unwrap();
    assert_eq!(a, b);
    assert!(!a.samples.is_empty());
    let back = Dataset::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
    let c = generate_dataset(&hsg, 1, 8, &DiskSpec::default(), 43).unwrap();
    assert_ne!(a, c);
}

#[test]
fn dataset_labels_come_from_the_room_path() {
    let hsg = small_building(5);
    let data = generate_dataset(&hsg, 1, 10, &DiskSpec::default(), 9).unwrap();
    for sample in &data.samples {
        let room = hsg.lookup(&sample.room).unwrap();
        let borders: BTreeSet<String> =
            hsg.border_nodes(room, 1).unwrap().iter().map(|&v| hsg.name(v).to_string()).collect();
        let flagged: BTreeSet<String> =
            sample.subgraph.nodes.iter().filter(|n| n.border).map(|n| n.id.clone()).collect();
        assert_eq!(borders, flagged);

        // The label can never exceed the largest class present in the room.
        let top = sample.subgraph.nodes.iter().map(|n| n.class).max().unwrap();
        assert!(sample.label <= top);

        // Some pair of border nodes has an optimal path whose top class is the label.
        let g = Graph::from_subgraph(&sample.subgraph, 3).unwrap();
        let idx: Vec<usize> = (0..sample.subgraph.len()).filter(|&i| sample.subgraph.nodes[i].border).collect();
        let hit = idx.iter().any(|&s| {
            idx.iter().filter(|&&t| t != s).any(|&t| {
                let (s, t) = (hcoa_core::NodeId::from_index(s), hcoa_core::NodeId::from_index(t));
                match coa_star(&g, s, t, euclidean_to(&g, t), |v| Ok(g.class(v)), 3, CoaConfig::default()) {
                    Ok(r) => r.path.iter().map(|&v| g.class(v)).max() == Some(sample.label),
                    Err(_) => false,
                }
            })
        });
        assert!(hit, "no border pair reproduces label {:?} in {}", sample.label, sample.room);
    }
}

#[test]
fn label_from_path_takes_the_room_maximum() {
    let (hsg, s, t) = road_grass_river();
    let (s, t) = (hsg.lookup(s).unwrap(), hsg.lookup(t).unwrap());
    let r = hcoa_star(&hsg, s, t, &MajorityClass::default(), HcoaConfig::default()).unwrap();
    let root = hsg.lookup("root").unwrap();
    let want = r.path.iter().filter_map(|&v| hsg.class(v)).max().unwrap();
    assert_eq!(label_from_path(&hsg, &r.path, root).unwrap(), want);
}

/// Straightforward kNN written without the model's internals.
fn brute_knn(train: &[(Vec<f64>, Class)], query: &[f64], k: usize) -> Class {
    let dims = query.len();
    let n = train.len() as f64;
    let mut scaled_train: Vec<Vec<f64>> = vec![Vec::new(); train.len()];
    let mut scaled_query = Vec::new();
    for d in 0..dims {
        let mean = train.iter().map(|(r, _)| r[d]).sum::<f64>() / n;
        let sd = (train.iter().map(|(r, _)| (r[d] - mean).powi(2)).sum::<f64>() / n).sqrt();
        if sd <= 1e-12 {
            continue;
        }
        for (row, (r, _)) in scaled_train.iter_mut().zip(train) {
            row.push((r[d] - mean) / sd);
        }
        scaled_query.push((query[d] - mean) / sd);
    }
    let mut order: Vec<(f64, usize)> = scaled_train
        .iter()
        .enumerate()
        .map(|(i, r)| (r.iter().zip(&scaled_query).map(|(a, b)| (a - b) * (a - b)).sum(), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = [0usize; 3];
    for &(_, i) in &order[..k] {
        votes[train[i].1.get() as usize - 1] += 1;
    }
    let best = *votes.iter().max().unwrap();
    Class::new(votes.iter().position(|&v| v == best).unwrap() as i64 + 1, 3).unwrap()
}

#[test]
fn knn_agrees_with_brute_force() {
    let train_data = generate_dataset(&small_building(11), 1, 15, &DiskSpec::default(), 1).unwrap();
    let test_data = generate_dataset(&small_building(12), 1, 10, &DiskSpec::default(), 2).unwrap();
    let rows: Vec<(Vec<f64>, Class)> = train_data
        .samples
        .iter()
        .map(|s| (knn_features(&s.subgraph, 3, TieBreak::Favorable).unwrap().to_vec(), s.label))
        .collect();
    for k in [1, 3, 5, 9] {
        let model = KnnClassifier::fit(&train_data.samples, k, 3, TieBreak::Favorable).unwrap();
        for s in &test_data.samples {
            let f = knn_features(&s.subgraph, 3, TieBreak::Favorable).unwrap();
            assert_eq!(model.classify_features(&f).unwrap(), brute_knn(&rows, &f.to_vec(), k), "k={k}");
        }
    }
}

#[test]
fn knn_model_round_trips() {
    let data = generate_dataset(&small_building(4), 1, 6, &DiskSpec::default(), 8).unwrap();
    let model = KnnClassifier::fit(&data.samples, 3, 3, TieBreak::Conservative).unwrap();
    assert_eq!(KnnClassifier::from_json(&model.to_json()).unwrap(), model);
}

#[test]
fn table_run_matches_rooms_predicted_by_knn() {
    let data = generate_dataset(&small_building(21), 1, 15, &DiskSpec::default(), 5).unwrap();
    let model = KnnClassifier::fit(&data.samples, 5, 3, TieBreak::Favorable).unwrap();
    let hsg = small_building(22);
    let rooms: Vec<(String, i64)> = hsg
        .layer_nodes(1)
        .iter()
        .map(|&r| {
            let f = knn_features(&hsg.semantic_subgraph(r).unwrap(), 3, TieBreak::Favorable).unwrap();
            (hsg.name(r).to_string(), model.classify_features(&f).unwrap().get() as i64)
        })
        .collect();
    let table = TableClassifier::from_pairs(&hsg, rooms.iter().map(|(n, c)| (n.as_str(), *c))).unwrap();
    let text = table.to_json();
    let loaded = TableClassifier::from_json(&text, 3).unwrap();
    assert_eq!(loaded.to_json(), text);

    let s = hsg.layer_nodes(0)[0];
    let t = *hsg.layer_nodes(0).last().unwrap();
    let via_table = hcoa_star(&hsg, s, t, &loaded, HcoaConfig::default()).unwrap();
    let via_model = hcoa_star(&hsg, s, t, &model, HcoaConfig::default()).unwrap();
    assert_eq!(via_table.path, via_model.path);
    assert_eq!(via_table.classifier_queries, via_model.classifier_queries);
}

#[test]
fn generator_is_reproducible() {
    let p = HierParams { rooms: 8, nodes_per_room: 9, ..Default::default() };
    assert_eq!(gen_hier_hsg(&p, 17).unwrap().to_json(), gen_hier_hsg(&p, 17).unwrap().to_json());
    assert_ne!(gen_hier_hsg(&p, 17).unwrap().to_json(), gen_hier_hsg(&p, 18).unwrap().to_json());
}

#[test]
fn generated_buildings_round_trip() {
    let hsg = small_building(31);
    let back = Hsg::from_json(&hsg.to_json()).unwrap();
    assert_eq!(back.to_json(), hsg.to_json());
    assert_eq!(back.num_layers(), 3);
}

#[test]
fn tree_clique_generator_passes_its_own_check() {
    for seed in 0..40 {
        let p = HierParams { rooms: 5, nodes_per_room: 4, tree_rooms: true, ..Default::default() };
        let hsg = gen_hier_hsg(&p, seed).unwrap();
        assert!(verify_tree_rooms(&hsg).unwrap(), "seed {seed}");
    }
}

#[test]
fn bundled_grid_fixture_is_current() {
    let text = include_str!("../fixtures/road_grass_river.json");
    let fixture = Hsg::from_json(text).unwrap();
    let (built, _, _) = road_grass_river();
    assert_eq!(fixture.to_json(), built.to_json());
}

#[test]
fn hierarchical_path_is_never_better_than_the_exact_optimum() {
    let p = HierParams { rooms: 12, nodes_per_room: 25, ..Default::default() };
    for seed in 0..5 {
        let hsg = gen_hier_hsg(&p, seed).unwrap();
        let lg = LayerGraph::new(&hsg, 0).unwrap();
        let nodes = hsg.layer_nodes(0);
        let (s, t) = (nodes[seed as usize], nodes[nodes.len() - 1 - seed as usize]);
        let r = hcoa_star(&hsg, s, t, &MajorityClass::default(), HcoaConfig::default()).unwrap();
        let o = exact_optimum(&lg.graph, lg.local(s).unwrap(), lg.local(t).unwrap()).unwrap();
        let key = r.key();
        let same = (key.class, key.count) == (o.top_class, o.count) && weights_match(r.g, o.weight);
        assert!(same || (key.class, key.count, r.g) > (o.top_class, o.count, o.weight), "seed {seed}");
    }
}
