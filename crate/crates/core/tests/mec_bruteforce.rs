use gfmredux::automata::Alphabet;
use gfmredux::gf_direct::ltl_to_gfm_gf;
use gfmredux::ltl::{parse, AtomSet};
use gfmredux::mdp::{maximal_end_components, product_nba, random_mdp, Mdp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Succ = Vec<Vec<Vec<usize>>>;

/// Enumerates all state subsets; a subset is an end component if every member
/// keeps an action that stays inside and the kept actions connect it
/// strongly. The maximal ones under inclusion are the MECs.
fn brute_force(succ: &Succ) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = succ.len();
    assert!(n <= 16);
    let mut ecs: Vec<(u32, Vec<Vec<usize>>)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let inside = |s: usize| mask & (1 << s) != 0;
        let members: Vec<usize> = (0..n).filter(|&s| inside(s)).collect();
        let kept: Vec<Vec<usize>> = members
            .iter()
            .map(|&s| {
                (0..succ[s].len())
                    .filter(|&a| succ[s][a].iter().all(|&t| inside(t)))
                    .collect()
            })
            .collect();
        if kept.iter().any(Vec::is_empty) {
            continue;
        }
        let strongly_connected = members.iter().all(|&from| {
            let mut seen = vec![false; n];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(u) = stack.pop() {
                let k = members.iter().position(|&m| m == u).unwrap();
                for &a in &kept[k] {
                    for &t in &succ[u][a] {
                        if !seen[t] {
                            seen[t] = true;
                            stack.push(t);
                        }
                    }
                }
            }
            members.iter().all(|&m| seen[m])
        });
        if strongly_connected {
            ecs.push((mask, kept));
        }
    }
    let mut out: Vec<(Vec<usize>, Vec<Vec<usize>>)> = ecs
        .iter()
        .filter(|(m, _)| !ecs.iter().any(|(o, _)| o != m && o & m == *m))
        .map(|(m, kept)| {
            (
                (0..n).filter(|&s| m & (1 << s) != 0).collect(),
                kept.clone(),
            )
        })
        .collect();
    out.sort();
    out
}

fn mdp_graph(m: &Mdp) -> Succ {
    (0..m.num_states())
        .map(|s| {
            m.actions(s)
                .iter()
                .map(|a| a.succ.iter().map(|(t, _)| *t).collect())
                .collect()
        })
        .collect()
}

#[test]
fn mecs_of_small_mdps_match_brute_force() {
    let al = Alphabet::plain(AtomSet::new(["a", "b"]).unwrap()).unwrap();
    for seed in 0..400u64 {
        let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(seed), &al, 5, 3);
        let g = mdp_graph(&m);
        let mut fast = maximal_end_components(&g);
        fast.sort();
        assert_eq!(fast, brute_force(&g), "seed {seed}");
    }
}

#[test]
fn mecs_of_small_products_match_brute_force() {
    let (f, atoms) = parse("G F (a & X b)").unwrap();
    let al = Alphabet::plain(atoms.clone()).unwrap();
    let gfm = ltl_to_gfm_gf(&f, &atoms).unwrap();
    let mut checked = 0;
    for seed in 0..300u64 {
        let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(seed), &al, 4, 2);
        let p = product_nba(&m, &gfm).unwrap();
        if p.num_states() > 14 {
            continue;
        }
        let g = p.action_graph();
        let mut fast = maximal_end_components(&g);
        fast.sort();
        assert_eq!(fast, brute_force(&g), "seed {seed}");
        checked += 1;
    }
    assert!(checked > 100);
}
