mod common;

use common::{brute_force_partner, random_labeled_graph, rng, wedge_is_valid};
use rand::Rng;
use topoedge::entropy::{te_profile, LabelSource};
use topoedge::graph::Split;
use topoedge::mixup::{
    form_random_wedges, form_wedges, mix_wedge, mixup_loss, pair_random_partners, select_high_te_edges, MixSample,
    SelectionMode,
};
use topoedge::nn::edge_embed;
use topoedge::tensor::Matrix;

#[test]
fn entropy_partner_matches_exhaustive_search() {
    let mut r = rng(5);
    for case in 0..40 {
        let n = r.random_range(3..=120);
        let m = r.random_range(1..=500.min(n * (n - 1) / 2));
        let classes = [2, 3, 5][case % 3];
        let (g, l) = random_labeled_graph(&mut r, n, m, classes);
        let p = te_profile(&g, &l, case % 3, LabelSource::TrainOnly).unwrap();
        let train = l.edges_in(Split::Train);
        let set = form_wedges(&g, &l, &p, &train);
        let mut it = set.wedges.iter();
        let mut dropped = 0;
        for &e in &train {
            match brute_force_partner(&g, &l, &p.te, e) {
                Some(f) => {
                    let w = it.next().expect("wedge for every edge with a partner");
                    assert_eq!((w.edge_1, w.edge_2), (e, f), "case {case}");
                    assert!(wedge_is_valid(&g, w), "case {case}: {w:?}");
                }
                None => dropped += 1,
            }
        }
        assert!(it.next().is_none());
        assert_eq!(set.dropped, dropped);
    }
}

#[test]
fn random_partners_are_valid_wedges_and_pairs() {
    let mut r = rng(6);
    for _ in 0..20 {
        let (g, l) = random_labeled_graph(&mut r, 60, 200, 2);
        let train = l.edges_in(Split::Train);
        let set = form_random_wedges(&g, &l, &train, &mut r);
        for w in &set.wedges {
            assert!(wedge_is_valid(&g, w));
            assert_eq!(l.split(w.edge_2), Some(Split::Train));
        }
        for s in pair_random_partners(&train, &train, &mut r) {
            let MixSample::Pair { edge_1, edge_2 } = s else { panic!("expected a pair") };
            assert_ne!(edge_1, edge_2);
            assert!(train.contains(&edge_2));
        }
    }
}

#[test]
fn top_k_prefers_entropy_then_smaller_id() {
    let mut r = rng(7);
    let (g, l) = random_labeled_graph(&mut r, 80, 300, 3);
    let p = te_profile(&g, &l, 1, LabelSource::TrainOnly).unwrap();
    let train = l.edges_in(Split::Train);
    let mut expect = train.clone();
    expect.sort_by(|&a, &b| p.te[b].partial_cmp(&p.te[a]).unwrap().then(a.cmp(&b)));
    let got = select_high_te_edges(&p, &train, 25, SelectionMode::TopK, &mut r).unwrap();
    let mut got_sorted = got.clone();
    got_sorted.sort_unstable();
    let mut want: Vec<usize> = expect[..25].to_vec();
    want.sort_unstable();
    assert_eq!(got_sorted, want);
}

#[test]
fn lambda_boundaries_reduce_to_real_edges() {
    let mut r = rng(8);
    let (g, l) = random_labeled_graph(&mut r, 40, 120, 2);
    let p = te_profile(&g, &l, 2, LabelSource::TrainOnly).unwrap();
    let train = l.edges_in(Split::Train);
    let z = Matrix::from_fn(40, 5, |_, _| r.random_range(-3.0..3.0));
    let s = Matrix::from_fn(g.edge_count(), 2, |_, _| r.random_range(-3.0..3.0));
    let concat = |a: &[f64], b: &[f64], c: &[f64]| -> Vec<f64> { a.iter().chain(b).chain(c).copied().collect() };
    for w in form_wedges(&g, &l, &p, &train).wedges {
        let one = mix_wedge(&z, Some(&s), &w, 1.0).unwrap();
        let zero = mix_wedge(&z, Some(&s), &w, 0.0).unwrap();
        assert_eq!(one, concat(z.row(w.centric), z.row(w.end_i), s.row(w.edge_1)));
        assert_eq!(zero, concat(z.row(w.centric), z.row(w.end_j), s.row(w.edge_2)));
        // Same multiset of blocks as the canonical embedding of the real edge.
        let mut canon = edge_embed(&z, Some(&s), w.edge_1, g.edge(w.edge_1));
        let mut mixed = one.clone();
        canon.sort_by(f64::total_cmp);
        mixed.sort_by(f64::total_cmp);
        assert_eq!(canon, mixed);
    }
    let logits = Matrix::from_fn(6, 2, |_, _| r.random_range(-2.0..2.0));
    let y1 = [0, 1, 0, 1, 1, 0];
    let a = mixup_loss(&logits, &y1, &[1, 1, 1, 0, 0, 0], 1.0, None).unwrap();
    let b = mixup_loss(&logits, &y1, &[0, 0, 0, 1, 1, 1], 1.0, None).unwrap();
    assert_eq!(a.loss, b.loss);
    assert_eq!(a.grad, b.grad);
}
