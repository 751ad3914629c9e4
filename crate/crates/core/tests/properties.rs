use std::collections::BTreeSet;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spcube::embeddings::{contains_pattern, density_t_with, enumerate_maps};
use spcube::operators::{duplicate, Duplication};
use spcube::patterns::{dual_pattern, layer_words, x_pattern};
use spcube::search::m_value;
use spcube::spterm::{enumerate_terms_with, random_term};
use spcube::{canonicalize, Exec, Kind, Multigraph, Pattern, SpTerm, Word};

fn word() -> impl Strategy<Value = Word> {
    (1usize..=16, any::<u64>(), any::<bool>(), any::<usize>()).prop_map(|(len, bits, edge, s)| {
        let ones = bits & ((1 << len) - 1);
        if edge {
            let star = s % len;
            Word::edge(len, ones & !(1 << star), star)
        } else {
            Word::vertex(len, ones)
        }
    })
}

fn term() -> impl Strategy<Value = SpTerm> {
    (1usize..=12, any::<u64>()).prop_map(|(d, seed)| random_term(d, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// A random subset of a small layer.
fn pattern(max_len: usize) -> impl Strategy<Value = Pattern> {
    (0usize..=max_len, 0usize..=max_len, any::<bool>(), any::<u64>())
        .prop_filter("layer fits", move |(z, o, edge, _)| z + o + *edge as usize <= max_len && z + o > 0)
        .prop_map(|(z, o, edge, pick)| {
            let kind = if edge { Kind::Edge } else { Kind::Vertex };
            let words = layer_words(kind, z, o).unwrap();
            let chosen = words.into_iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, w)| w);
            Pattern::new(kind, z, o, chosen).unwrap()
        })
}

fn random_graph() -> impl Strategy<Value = Multigraph> {
    (1usize..=6, prop::collection::vec((0usize..6, 0usize..6), 0..10))
        .prop_map(|(n, edges)| Multigraph::new(n, edges.into_iter().map(|(u, v)| (u % n, v % n)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn word_text_round_trip(w in word()) {
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn word_complement_is_involution(w in word()) {
        prop_assert_eq!(w.complement().complement(), w);
        prop_assert_eq!(w.complement().weight(), w.zero_count());
    }

    #[test]
    fn word_remove_undoes_insert(w in word(), i in any::<usize>(), one in any::<bool>()) {
        prop_assume!(w.len() < 16);
        let i = i % (w.len() + 1);
        let c = if one { '1' } else { '0' };
        prop_assert_eq!(w.insert(i, c).remove(i), w);
    }

    #[test]
    fn term_text_round_trip(t in term()) {
        let back: SpTerm = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn term_dual_is_involution(t in term()) {
        prop_assert_eq!(t.dual().dual(), t.clone());
        let (trees, forests) = t.tf_counts();
        prop_assert_eq!(t.dual().tf_counts(), (forests, trees));
    }

    #[test]
    fn canonical_key_ignores_child_order_and_flips(t in term()) {
        prop_assert_eq!(canonicalize(&t.flip()), canonicalize(&t));
        prop_assert_eq!(canonicalize(&t.normalized()), canonicalize(&t));
    }

    #[test]
    fn graph_json_round_trip(g in random_graph(), mark in any::<usize>()) {
        let eligible: Vec<usize> = (0..g.edge_count()).filter(|&e| !g.is_loop(e) && !g.is_bridge(e)).collect();
        let g = match eligible.len() {
            0 => g,
            k => g.clone().with_distinguished(eligible[mark % k]).unwrap(),
        };
        prop_assert_eq!(Multigraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn pattern_file_round_trip(p in pattern(7)) {
        prop_assert_eq!(Pattern::from_file_string(&p.to_file_string()).unwrap(), p);
    }

    #[test]
    fn pattern_dual_is_involution(p in pattern(7)) {
        let d = dual_pattern(&p);
        prop_assert_eq!((d.zeros(), d.ones()), (p.ones(), p.zeros()));
        prop_assert_eq!(dual_pattern(&d), p);
    }

    #[test]
    fn duplications_are_exchanged_by_duality(p in pattern(6), i in any::<usize>()) {
        prop_assume!(p.word_len() > 0);
        let i = i % p.word_len();
        let left = dual_pattern(&duplicate(&p, i, Duplication::D).unwrap());
        let right = duplicate(&dual_pattern(&p), i, Duplication::DPrime).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn maps_shift_weights(a in 0usize..3, b in 0usize..3, extra0 in 0usize..3, extra1 in 0usize..3, bits in any::<u64>()) {
        prop_assume!(a + b > 0);
        let (a2, b2) = (a + extra0, b + extra1);
        let w = layer_words(Kind::Vertex, a, b).unwrap();
        let w = &w[bits as usize % w.len()];
        for p in enumerate_maps(a, b, a2, b2, false).unwrap() {
            let image = p.apply(w).unwrap();
            prop_assert_eq!((image.zero_count(), image.weight()), (a2, b2));
            let text: spcube::embeddings::EmbeddingMap = p.to_string().parse().unwrap();
            prop_assert_eq!(text, p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn density_is_monotone_and_detects_containment(x in pattern(4), s in any::<u64>(), t in any::<u64>()) {
        prop_assume!(!x.is_empty());
        let (z, o) = (x.zeros() + 1, x.ones() + 1);
        let layer = layer_words(x.kind(), z, o).unwrap();
        let pick = |m: u64| layer.iter().enumerate().filter(move |(i, _)| m >> (i % 64) & 1 == 1).map(|(_, w)| *w);
        let small = Pattern::new(x.kind(), z, o, pick(s & t)).unwrap();
        let big = Pattern::new(x.kind(), z, o, pick(s)).unwrap();
        let ts = density_t_with(&x, &small, Exec::Sequential).unwrap();
        let tb = density_t_with(&x, &big, Exec::Sequential).unwrap();
        prop_assert!(ts <= tb);
        prop_assert_eq!(contains_pattern(&big, &x).unwrap().is_some(), !tb.is_zero());
        let td = density_t_with(&dual_pattern(&x), &dual_pattern(&big), Exec::Sequential).unwrap();
        prop_assert_eq!(td, tb);
    }

    #[test]
    fn density_agrees_across_executors(x in pattern(4), s in any::<u64>()) {
        prop_assume!(!x.is_empty());
        let (z, o) = (x.zeros() + 2, x.ones() + 1);
        let layer = layer_words(x.kind(), z, o).unwrap();
        let words: BTreeSet<Word> = layer.into_iter().enumerate().filter(|(i, _)| s >> (i % 64) & 1 == 1).map(|(_, w)| w).collect();
        let big = Pattern::new(x.kind(), z, o, words).unwrap();
        prop_assert_eq!(
            density_t_with(&x, &big, Exec::Sequential).unwrap(),
            density_t_with(&x, &big, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn x_patterns_have_one_word_per_tree(g in random_graph()) {
        prop_assume!(g.is_connected() && g.edge_count() > 0);
        let x = x_pattern(&g).unwrap();
        prop_assert_eq!(x.len(), g.spanning_trees().unwrap().len());
        prop_assert_eq!(x.ones(), g.vertex_count() - 1);
    }
}

#[test]
fn executors_agree_on_searches() {
    for d in 1..=8 {
        let seq: Vec<String> = enumerate_terms_with(d, Exec::Sequential).iter().map(|t| t.to_string()).collect();
        let par: Vec<String> = enumerate_terms_with(d, Exec::Parallel).iter().map(|t| t.to_string()).collect();
        assert_eq!(seq, par, "d = {d}");
        let a = m_value(d, Exec::Sequential).unwrap();
        let b = m_value(d, Exec::Parallel).unwrap();
        assert_eq!((a.value, a.witness.to_string()), (b.value, b.witness.to_string()), "d = {d}");
    }
}
