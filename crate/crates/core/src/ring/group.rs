use super::{GeneratorDecl, GeneratorKind, Ring, RingPresentation};
use crate::error::{Error, Result};
use crate::ground::is_prime;

impl RingPresentation {
    /// `R[C_{n_1} x ... x C_{n_r}]`: one degree-0 generator per factor with
    /// `g^n = 1`. Trivial factors are skipped.
    ///
    /// Graded-locality survives only when the residue characteristic `p` is
    /// positive and every order is a power of `p`; then `g - 1` joins the
    /// degree-0 maximal ideal. Otherwise the flag is cleared.
    pub fn group_ring(&self, orders: &[u64]) -> Result<Ring> {
        if let Some(n) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidInput(format!("cyclic factor of order {n}")));
        }
        let orders: Vec<u64> = orders.iter().copied().filter(|&n| n > 1).collect();
        if orders.is_empty() {
            return RingPresentation::new(
                self.ground().clone(),
                self.generators().to_vec(),
                self.relations().to_vec(),
                self.flags().clone(),
            );
        }
        let mut names = Vec::new();
        for i in 0..orders.len() {
            let mut name = if orders.len() == 1 { "g".to_string() } else { format!("g{}", i + 1) };
            while self.generator_index(&name).is_some() || names.contains(&name) {
                name.push('_');
            }
            names.push(name);
        }
        let mut flags = self.flags().clone();
        flags.local_at_each_prime = None;
        if flags.graded_local == Some(true) {
            let p = self.ground().residue_characteristic().filter(|&p| p > 0 && is_prime(p));
            let all_p_powers = p.is_some_and(|p| orders.iter().all(|&n| is_power_of(n, p)));
            if all_p_powers {
                flags.max_ideal0.extend(names.iter().map(|g| format!("{g} - 1")));
            } else {
                flags.graded_local = None;
                flags.max_ideal0.clear();
            }
        }
        let gens = names
            .iter()
            .zip(&orders)
            .map(|(g, &n)| GeneratorDecl::new(g, 0, GeneratorKind::Integral(n as u32)))
            .collect();
        let relations: Vec<String> = names.iter().zip(&orders).map(|(g, n)| format!("{g}^{n} - 1")).collect();
        self.extend(gens, &relations, flags)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}
