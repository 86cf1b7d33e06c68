//! Property tests over small random graphs and orders.

mod common;

use cch::customize::{customize, read_customized, write_customized, CustomizeOptions};
use cch::graph::{dijkstra, expand_turns, ArcId, Coordinates, InputGraph, NodeId, TurnCost, TurnTable, Weight};
use cch::order::{nested_dissection_order, RankOrder};
use cch::preprocess::{read_cch, write_cch, Cch};
use cch::query::{CchPotentialAstar, LazyRphast, Query};
use common::{all_pairs, naive_elimination, walk_length};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Case {
    graph: InputGraph,
    order: RankOrder,
    coords: Coordinates,
}

fn case(max_n: usize) -> impl Strategy<Value = Case> {
    (1..=max_n).prop_flat_map(|n| {
        let arcs = prop::collection::vec((0..n as NodeId, 0..n as NodeId, 1..200u32), 0..4 * n);
        let perm = Just((0..n as NodeId).collect::<Vec<_>>()).prop_shuffle();
        let points = prop::collection::vec((0..1000i32, 0..1000i32), n);
        (arcs, perm, points).prop_map(move |(arcs, perm, points)| Case {
            graph: InputGraph::from_arcs(n, arcs.into_iter().filter(|&(u, v, _)| u != v)).0,
            order: RankOrder::from_vertex_at(perm).unwrap(),
            coords: Coordinates::new(points),
        })
    })
}

fn ancestors(cch: &Cch, v: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut x = v;
    while let Some(p) = cch.tree().parent(x) {
        out.push(p);
        x = p;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn upward_neighborhoods_form_cliques(c in case(40)) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        let up = cch.upward();
        for u in 0..cch.num_nodes() as NodeId {
            let heads = up.upward(u);
            for (i, &a) in heads.iter().enumerate() {
                for &b in &heads[i + 1..] {
                    prop_assert!(up.find_arc(a, b).is_some(), "missing {a}-{b} below {u}");
                }
            }
        }
    }

    #[test]
    fn upward_neighbors_are_ancestors(c in case(40)) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        for u in 0..cch.num_nodes() as NodeId {
            let anc = ancestors(&cch, u);
            for &v in cch.upward().upward(u) {
                prop_assert!(anc.contains(&v));
            }
        }
    }

    #[test]
    fn arc_count_matches_elimination_game(c in case(30)) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        let fill = naive_elimination(&c.graph, &c.order).len();
        prop_assert_eq!(cch.num_arcs(), fill);
    }

    #[test]
    fn queries_match_dijkstra_and_reset(c in case(30), perfect in any::<bool>(), threads in 1..4usize) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        let (custom, _) = customize(&cch, &c.graph, CustomizeOptions::new(perfect, threads)).unwrap();
        let oracle = all_pairs(&c.graph);
        let mut q = Query::new(&cch, &custom);
        let n = c.graph.num_nodes() as NodeId;
        for s in 0..n {
            for t in 0..n {
                let r = q.query(s, t);
                prop_assert_eq!(r.distance, oracle[s as usize][t as usize]);
                prop_assert!(q.is_clean());
                if r.distance != cch::graph::INFINITY {
                    let path = q.path().unwrap();
                    prop_assert_eq!(walk_length(&c.graph, &path, s, t), Some(r.distance));
                }
            }
        }
    }

    #[test]
    fn nested_dissection_orders_are_permutations(c in case(60)) {
        let nd = nested_dissection_order(&c.graph, &c.coords).unwrap();
        let mut seen = nd.order.vertices().to_vec();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..c.graph.num_nodes() as NodeId).collect::<Vec<_>>());
        nd.decomposition.validate(c.graph.num_nodes()).unwrap();
    }

    #[test]
    fn rphast_memo_is_stable(c in case(30), sources in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        let (custom, _) = customize(&cch, &c.graph, CustomizeOptions::new(false, 1)).unwrap();
        let mut rphast = LazyRphast::one_to_many(&cch, &custom);
        let n = c.graph.num_nodes();
        for s in sources {
            let s = s.index(n) as NodeId;
            let oracle = dijkstra(&c.graph, s, None);
            rphast.select(s);
            let first: Vec<Weight> = (0..n as NodeId).map(|t| rphast.distance(t).unwrap()).collect();
            prop_assert_eq!(&first, &oracle);
            let relaxed = rphast.relaxed_arcs();
            let again: Vec<Weight> = (0..n as NodeId).rev().map(|t| rphast.distance(t).unwrap()).collect();
            prop_assert_eq!(again.into_iter().rev().collect::<Vec<_>>(), first);
            prop_assert_eq!(rphast.relaxed_arcs(), relaxed);
        }
    }

    #[test]
    fn turn_aware_astar_matches_expanded_dijkstra(
        c in case(20),
        turns in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), prop::option::of(0..50u32)), 0..30),
    ) {
        let g = &c.graph;
        prop_assume!(g.num_arcs() > 0);
        let mut table = TurnTable::new();
        for (a, b, cost) in turns {
            let a = a.index(g.num_arcs());
            let via = g.head()[a];
            let out = g.arc_range(via);
            if out.is_empty() {
                continue;
            }
            let b = out.start + b.index(out.len());
            table.insert(a as ArcId, b as ArcId, cost.map_or(TurnCost::Forbidden, TurnCost::Cost));
        }
        let x = expand_turns(g, &table).unwrap();
        let cch = Cch::new(g, &c.order).unwrap();
        let (base, _) = customize(&cch, g, CustomizeOptions::new(true, 1)).unwrap();
        let to_base = (0..x.graph.num_nodes() as NodeId).map(|v| x.original_tail(v)).collect();
        let mut astar = CchPotentialAstar::new(&cch, &base, &x.graph, Some(to_base)).unwrap();
        let n = x.graph.num_nodes() as NodeId;
        for s in 0..n {
            let oracle = dijkstra(&x.graph, s, None);
            for t in 0..n {
                prop_assert_eq!(astar.query(s, t).unwrap().distance, oracle[t as usize]);
            }
        }
    }

    #[test]
    fn artifacts_round_trip(c in case(30), perfect in any::<bool>()) {
        let cch = Cch::new(&c.graph, &c.order).unwrap();
        let mut buf = Vec::new();
        write_cch(&cch, &mut buf).unwrap();
        prop_assert_eq!(&read_cch(&buf).unwrap(), &cch);

        let (custom, _) = customize(&cch, &c.graph, CustomizeOptions::new(perfect, 2)).unwrap();
        let mut buf = Vec::new();
        write_customized(&cch, &custom, &mut buf).unwrap();
        let (back_cch, back) = read_customized(&buf).unwrap();
        prop_assert_eq!(&back_cch, &cch);
        prop_assert_eq!(&back, &custom);
    }
}
