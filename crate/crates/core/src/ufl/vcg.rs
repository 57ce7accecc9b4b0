//! Payments of the VCG mechanism that always outputs the LP optimum.

use crate::error::{Error, Result};
use crate::instance::UflInstance;
use crate::oracles::ufl::{solve_flp_costs, FractionalSolution};
use crate::par::{self, Exec};

/// `p*_i = OPT(LP without i's facilities) − (OPT(LP) − Σ_{l∈T_i} f_l y*_l)`.
pub fn fractional_vcg_payments(
    inst: &UflInstance,
    frac: &FractionalSolution,
    exec: Exec,
) -> Result<Vec<f64>> {
    let open = inst.open_costs();
    par::try_map_indexed(exec, inst.agent_count(), |i| {
        let owned = inst.agent_facilities(i);
        let mut closed = vec![false; inst.facility_count()];
        for &l in &owned {
            closed[l] = true;
        }
        if inst.clients() > 0 && closed.iter().all(|&c| c) {
            return Err(Error::Monopoly(i));
        }
        let without = match solve_flp_costs(&open, inst.assign_costs(), &closed) {
            Ok(s) => s.value,
            Err(Error::Lp(s)) if s == "infeasible" => return Err(Error::Monopoly(i)),
            Err(e) => return Err(e),
        };
        let own_share: f64 = owned.iter().map(|&l| open[l] * frac.y[l]).sum();
        Ok(without - (frac.value - own_share))
    })
}
