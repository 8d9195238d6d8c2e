use serde::Serialize;

use super::{dependency_graph, FiniteDynamicalSystem, StrongComponent};

/// Outcome of the loop-number criterion for monomial systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialVerdict {
    pub is_monomial: bool,
    /// Only decided for monomial systems over `F_2`.
    pub all_periodic_are_fixed: Option<bool>,
    pub components: Vec<StrongComponent>,
}

/// Decide from loop numbers alone whether every periodic point is fixed.
///
/// A system is monomial when each coordinate is a single term with
/// coefficient one (the constant `1` included). Over `F_2` such a system has
/// only fixed points as periodic points iff every nontrivial strong component
/// of its dependency graph has loop number 1. Single vertices without a
/// self-loop carry no loop and do not count against the criterion. Over other
/// fields no verdict is returned.
pub fn monomial_fixed_point_test(fds: &FiniteDynamicalSystem) -> MonomialVerdict {
    let is_monomial = fds.coordinates().iter().all(|f| f.is_monic_monomial());
    let graph = dependency_graph(fds);
    let components = graph.components().to_vec();
    let all_periodic_are_fixed = (is_monomial && fds.field().order() == 2).then(|| {
        components
            .iter()
            .all(|c| c.loop_number.is_none_or(|l| l == 1))
    });
    MonomialVerdict {
        is_monomial,
        all_periodic_are_fixed,
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::system;
    use super::super::{phase_space, DEFAULT_BOUND};
    use super::*;

    fn brute_force_fixed(fds: &FiniteDynamicalSystem) -> bool {
        phase_space(fds, DEFAULT_BOUND)
            .unwrap()
            .cycle_lengths()
            .iter()
            .all(|&l| l == 1)
    }

    #[test]
    fn examples() {
        let f = system(2, &["x1*x2", "x1"]);
        let v = monomial_fixed_point_test(&f);
        assert_eq!(v.all_periodic_are_fixed, Some(true));
        assert!(brute_force_fixed(&f));
        let periodic = f.periodic_points(2, false, DEFAULT_BOUND).unwrap();
        assert_eq!(periodic, vec![vec![0, 0], vec![1, 1]]);

        let swap = system(2, &["x2", "x1"]);
        assert_eq!(monomial_fixed_point_test(&swap).all_periodic_are_fixed, Some(false));
        assert!(!brute_force_fixed(&swap));

        assert_eq!(
            monomial_fixed_point_test(&system(2, &["x1"])).all_periodic_are_fixed,
            Some(true)
        );
    }

    #[test]
    fn abstains_when_not_applicable() {
        let v = monomial_fixed_point_test(&system(2, &["x1 + x2", "x1"]));
        assert!(!v.is_monomial);
        assert_eq!(v.all_periodic_are_fixed, None);
        let v = monomial_fixed_point_test(&system(3, &["x2", "x1^2"]));
        assert!(v.is_monomial);
        assert_eq!(v.all_periodic_are_fixed, None);
        assert_eq!(v.components[0].loop_number, Some(2));
        assert!(!monomial_fixed_point_test(&system(3, &["2*x2", "x1"])).is_monomial);
    }
}
