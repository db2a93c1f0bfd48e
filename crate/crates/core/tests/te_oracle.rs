mod common;

use common::{dense_te, random_labeled_graph, rng};
use rand::Rng;
use topoedge::entropy::{diffuse, node_label_encoding, te_profile, LabelSource};
use topoedge::graph::{AttributedGraph, EdgeLabeling, Split};

#[test]
fn sparse_profile_matches_dense_oracle() {
    let mut r = rng(11);
    for case in 0..50 {
        let n = r.random_range(2..=200);
        let m = r.random_range(1..=3 * n);
        let classes = [2, 3, 5][case % 3];
        let depth = case % 4;
        let (g, l) = random_labeled_graph(&mut r, n, m, classes);
        for source in [LabelSource::TrainOnly, LabelSource::AllLabeled] {
            let p = te_profile(&g, &l, depth, source).unwrap();
            let (te, covered) = dense_te(&g, &l, depth, source);
            assert_eq!(p.covered, covered, "case {case}");
            for (e, (a, b)) in p.te.iter().zip(&te).enumerate() {
                assert!((a - b).abs() <= 1e-9, "case {case} edge {e}: {a} vs {b}");
            }
        }
    }
}

fn all_train(classes: usize, labels: Vec<usize>) -> EdgeLabeling {
    let n = labels.len();
    EdgeLabeling::with_splits(classes, labels.into_iter().map(Some).collect(), vec![Some(Split::Train); n]).unwrap()
}

#[test]
fn triangle_first_hop_mixes_neighbors() {
    // a–b: 0, b–c: 1, a–c: 0 gives H⁰ a=(1,0), b=(½,½), c=(½,½).
    let g = AttributedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], None, None).unwrap();
    let l = all_train(2, vec![0, 1, 0]);
    let h0 = node_label_encoding(&g, &l, LabelSource::TrainOnly);
    assert_eq!(h0.row(0), &[1.0, 0.0]);
    assert_eq!(h0.row(1), &[0.5, 0.5]);
    let h1 = diffuse(&h0, &g, 1);
    assert_eq!(h1.row(0), &[0.5, 0.5]);
    assert_eq!(h1.row(1), &[0.75, 0.25]);
}

#[test]
fn simplex_initial_rows_reproduce_hand_product() {
    // H⁰ rows a=(1,0), b=(0,1), c=(1,0) on a triangle: H¹_a = ((0,1)+(1,0))/2.
    let g = AttributedGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], None, None).unwrap();
    let h0 = topoedge::tensor::Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]);
    let h1 = diffuse(&h0, &g, 1);
    assert_eq!(h1.row(0), &[0.5, 0.5]);
}

#[test]
fn pure_components_have_zero_entropy_at_any_depth() {
    let g = AttributedGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], None, None).unwrap();
    let l = all_train(2, vec![0, 0, 0, 1, 1, 1]);
    for depth in 0..4 {
        let p = te_profile(&g, &l, depth, LabelSource::TrainOnly).unwrap();
        assert!(p.te.iter().all(|&t| t == 0.0), "depth {depth}: {:?}", p.te);
        assert_eq!(p.te, dense_te(&g, &l, depth, LabelSource::TrainOnly).0);
    }
}

#[test]
fn unlabeled_neighbourhood_is_uncovered() {
    let g = AttributedGraph::from_edges(4, &[(0, 1), (2, 3)], None, None).unwrap();
    let l = EdgeLabeling::with_splits(2, vec![Some(0), Some(1)], vec![Some(Split::Train), Some(Split::Test)]).unwrap();
    let p = te_profile(&g, &l, 2, LabelSource::TrainOnly).unwrap();
    assert_eq!(p.covered, vec![true, false]);
    assert_eq!(p.te[1], 0.0);
    let all = te_profile(&g, &l, 2, LabelSource::AllLabeled).unwrap();
    assert_eq!(all.covered, vec![true, true]);
}
