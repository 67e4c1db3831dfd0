use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

use super::{MultiportNetwork, Repr};

/// Connects a `k`-port admittance `load` to the ports `load_ports` of `net`
/// and returns the admittance matrix seen at the remaining ports, in their
/// original order:
///
/// `Y_red = Y_PP − Y_PA (Y_AA + Y_load)⁻¹ Y_AP`.
///
/// For a DMN partitioned as `j[[A, Bᵀ], [B, C]]` with the antenna on the
/// first block this is `jC + B (Y_load + jA)⁻¹ Bᵀ`.
pub fn terminate(
    net: &MultiportNetwork,
    load: &MultiportNetwork,
    load_ports: &[usize],
) -> Result<MultiportNetwork> {
    for x in [net, load] {
        if x.repr() != Repr::Y {
            return Err(Error::WrongRepresentation {
                expected: Repr::Y,
                found: x.repr(),
            });
        }
    }
    let (fa, fb) = (net.freq(), load.freq());
    if (fa - fb).abs() > 1e-9 * fa.abs().max(fb.abs()) {
        return Err(Error::FrequencyMismatch { a: fa, b: fb });
    }
    let n = net.n_ports();
    let k = load_ports.len();
    if load.n_ports() != k {
        return Err(Error::InvalidInput(format!(
            "load has {} ports but {} port indices were given",
            load.n_ports(),
            k
        )));
    }
    if k >= n {
        return Err(Error::InvalidInput("termination must leave at least one port".into()));
    }
    let mut is_load = vec![false; n];
    for &p in load_ports {
        if p >= n || is_load[p] {
            return Err(Error::InvalidInput(format!("bad or repeated load port index {p}")));
        }
        is_load[p] = true;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| !is_load[i]).collect();
    let y = net.matrix();
    let sub = |rows: &[usize], cols: &[usize]| {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| y[(rows[i], cols[j])])
    };
    let ypp = sub(&keep, &keep);
    let ypa = sub(&keep, load_ports);
    let yap = sub(load_ports, &keep);
    let yaa = sub(load_ports, load_ports) + load.matrix();
    let inv = linalg::checked_inverse(&yaa).map_err(|condition| Error::SingularTermination { condition })?;
    let reduced = ypp - ypa * inv * yap;
    MultiportNetwork::new(Repr::Y, reduced, net.freq(), net.ref_impedance())
}
