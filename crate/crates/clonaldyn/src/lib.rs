//! File formats, Monte Carlo drivers, and run bookkeeping around
//! [`clonaldyn_core`]. The core crate solves one explicit system; this one
//! feeds it random ensembles, reads and writes configs and results, and
//! estimates the long-run rates that systems with Poisson birth streams
//! converge to.

pub mod io;
pub mod manifest;
pub mod pit;
