//! Constructors for the structured colourings used by the applications and
//! for random locally k-bounded test instances.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colouring::{EdgeColouring, MergedClasses, Rule};
use crate::error::{Error, Result};
use crate::group::{Group, GroupSpec};

/// Near-distance colouring of `K_{2m+1}`: edge `ij` gets the cyclic distance
/// between `i` and `j`, stored as id `distance - 1`.
pub fn nd_colouring(m: usize) -> Result<EdgeColouring> {
    if m == 0 {
        return Err(Error::Parameter("near-distance colouring needs m >= 1".into()));
    }
    Ok(EdgeColouring::from_rule(2 * m + 1, 2, m, Rule::NearDistance { m }))
}

/// Sum colouring of `K_|G|` with vertices identified with group elements.
///
/// In an elementary abelian 2-group the sum `0` never occurs on an edge, so
/// colour ids there are the group element minus one.
pub fn group_sum_colouring(spec: &GroupSpec) -> Result<EdgeColouring> {
    let group = Group::new(spec.clone())?;
    let order = group.order();
    let colours = if group.is_elementary_two() { order - 1 } else { order };
    Ok(EdgeColouring::from_rule(order, 1, colours, Rule::GroupSum { group }))
}

/// Circle-method one-factorisation of `K_n` with pivot vertex `n - 1`.
pub fn round_robin_proper(n: usize) -> Result<EdgeColouring> {
    if n % 2 == 1 {
        return Err(Error::Parity(format!("round robin needs an even vertex count, got {n}")));
    }
    if n < 2 {
        return Err(Error::Parameter("round robin needs n >= 2".into()));
    }
    Ok(EdgeColouring::from_rule(n, 1, n - 1, Rule::RoundRobin))
}

/// Random locally k-bounded colouring: the perfect matchings of a round-robin
/// factorisation (padded to an even vertex count) are shuffled and merged in
/// groups of at most `k`.
pub fn random_locally_k_bounded(n: usize, k: usize, seed: u64) -> Result<EdgeColouring> {
    if n < 2 || k == 0 {
        return Err(Error::Parameter(format!("need n >= 2 and k >= 1, got n={n}, k={k}")));
    }
    let base_n = n + n % 2;
    let classes = base_n - 1;
    let mut order: Vec<u32> = (0..classes as u32).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut class_colour = vec![0u32; classes];
    let colour_classes: Vec<Vec<u32>> = order
        .chunks(k)
        .enumerate()
        .map(|(colour, chunk)| {
            for &cls in chunk {
                class_colour[cls as usize] = colour as u32;
            }
            let mut chunk = chunk.to_vec();
            chunk.sort_unstable();
            chunk
        })
        .collect();
    let num_colours = colour_classes.len();
    let merged = MergedClasses { base_n, class_colour, colour_classes, seed };
    Ok(EdgeColouring::from_rule(n, k, num_colours, Rule::MergedRoundRobin(merged)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::DEFAULT_SCAN_LIMIT;

    #[test]
    fn nd_small_cases() {
        let c = nd_colouring(2).unwrap();
        assert_eq!((c.n(), c.num_colours()), (5, 2));
        assert_eq!(c.colour_label(c.colour(0, 1)), 1);
        assert_eq!(c.colour_label(c.colour(1, 4)), 2);
        assert_eq!(c.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 2);
        let k3 = nd_colouring(1).unwrap();
        assert_eq!(k3.num_colours(), 1);
        assert!([(0, 1), (0, 2), (1, 2)].iter().all(|&(u, v)| k3.colour(u, v) == 0));
        assert!(nd_colouring(0).is_err());
    }

    #[test]
    fn nd_classes_are_cycles() {
        let c = nd_colouring(2).unwrap();
        for col in 0..2 {
            let edges: Vec<_> = (0..5)
                .flat_map(|v| (v + 1..5).map(move |u| (v, u)))
                .filter(|&(v, u)| c.colour(v, u) == col)
                .collect();
            assert_eq!(edges.len(), 5);
            for v in 0..5 {
                assert_eq!(edges.iter().filter(|&&(a, b)| a == v || b == v).count(), 2);
            }
        }
    }

    #[test]
    fn nd_every_colour_degree_is_two() {
        for m in 1..=100 {
            let c = nd_colouring(m).unwrap();
            for v in [0, m, 2 * m] {
                for col in 0..m {
                    assert_eq!(c.colour_degree(v, col).unwrap(), 2);
                }
            }
        }
    }

    #[test]
    fn group_sum_examples() {
        let z3 = group_sum_colouring(&GroupSpec::cyclic(3)).unwrap();
        assert_eq!([z3.colour(0, 1), z3.colour(0, 2), z3.colour(1, 2)], [1, 2, 0]);
        let v4 = group_sum_colouring(&GroupSpec::elementary_two(2)).unwrap();
        assert_eq!(v4.num_colours(), 3);
        for col in 0..3 {
            let class: Vec<_> = (0..4)
                .flat_map(|v| (v + 1..4).map(move |u| (v, u)))
                .filter(|&(v, u)| v4.colour(v, u) == col)
                .collect();
            assert_eq!(class.len(), 2);
            assert!(class[0].0 != class[1].0 && class[0].1 != class[1].1);
        }
        let z7 = group_sum_colouring(&GroupSpec::cyclic(7)).unwrap();
        assert_eq!(z7.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 1);
        assert!(group_sum_colouring(&GroupSpec::cyclic(1)).is_err());
    }

    #[test]
    fn group_sum_colours_dense() {
        for spec in [
            GroupSpec::cyclic(2),
            GroupSpec::cyclic(9),
            GroupSpec::cyclic(10),
            GroupSpec::elementary_two(3),
            GroupSpec::product(vec![2, 4]),
            GroupSpec::product(vec![3, 3]),
        ] {
            let c = group_sum_colouring(&spec).unwrap();
            assert!(c.colours_are_dense(), "{spec:?}");
        }
    }

    #[test]
    fn round_robin_examples() {
        for n in [2, 4, 6, 10] {
            let c = round_robin_proper(n).unwrap();
            assert_eq!(c.num_colours(), n - 1);
            assert_eq!(c.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 1);
            for col in 0..n - 1 {
                for v in 0..n {
                    assert_eq!(c.colour_degree(v, col).unwrap(), 1, "perfect matching");
                }
            }
        }
        assert!(matches!(round_robin_proper(5), Err(Error::Parity(_))));
    }

    #[test]
    fn random_k_bounded_examples() {
        let c = random_locally_k_bounded(4, 1, 3).unwrap();
        assert_eq!(c.num_colours(), 3);
        assert_eq!(c.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap(), 1);
        let c = random_locally_k_bounded(6, 3, 11).unwrap();
        assert_eq!(c.num_colours(), 2);
        let a = random_locally_k_bounded(13, 2, 99).unwrap();
        let b = random_locally_k_bounded(13, 2, 99).unwrap();
        for v in 1..13 {
            for u in 0..v {
                assert_eq!(a.colour(u, v), b.colour(u, v));
            }
        }
    }

    #[test]
    fn random_k_bounded_respects_bound_and_density() {
        for n in 2..30 {
            for k in 1..5 {
                let c = random_locally_k_bounded(n, k, (n * 31 + k) as u64).unwrap();
                assert!(c.verify_locally_k_bounded(DEFAULT_SCAN_LIMIT).unwrap() <= k);
                assert!(c.colours_are_dense());
            }
        }
    }
}
