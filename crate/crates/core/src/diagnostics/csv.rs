use std::io::{self, Write};

use super::{DecompositionSample, LedgerRow, TailRow};

fn line(w: &mut impl Write, values: &[f64]) -> io::Result<()> {
    let cells: Vec<String> = values.iter().map(|x| format!("{x:.16e}")).collect();
    writeln!(w, "{}", cells.join(","))
}

pub fn write_ledger_csv(mut w: impl Write, rows: &[LedgerRow]) -> io::Result<()> {
    writeln!(
        w,
        "t,kinetic,stress_energy,dissipation_p,dissipation_2,relax,coupling,g_work,budget_residual"
    )?;
    for r in rows {
        line(
            &mut w,
            &[
                r.t,
                r.kinetic,
                r.stress_energy,
                r.dissipation_p,
                r.dissipation_2,
                r.relax,
                r.coupling,
                r.g_work,
                r.budget_residual,
            ],
        )?;
    }
    Ok(())
}

/// One line per `(t, M)` pair.
pub fn write_tail_csv(mut w: impl Write, rows: &[TailRow]) -> io::Result<()> {
    writeln!(w, "t,M,tail")?;
    for r in rows {
        for (m, tail) in r.thresholds.iter().zip(&r.tails) {
            line(&mut w, &[r.t, *m, *tail])?;
        }
    }
    Ok(())
}

pub fn write_decomposition_csv(mut w: impl Write, rows: &[DecompositionSample]) -> io::Result<()> {
    writeln!(w, "t,norm_tau,norm_psi_p,norm_H_2,superposition_residual")?;
    for r in rows {
        line(
            &mut w,
            &[r.t, r.norm_tau, r.norm_psi_p, r.norm_h_2, r.superposition_residual],
        )?;
    }
    Ok(())
}
