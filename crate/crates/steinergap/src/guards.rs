//! Desk-scale guards. Defaults can be relaxed with `STEINERGAP_GUARDS`:
//! either `off`, or a comma list such as `vertex_vars=60,otc_n=9`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub vertex_vars: usize,
    pub vertex_rows: usize,
    pub integer_n: usize,
    pub bruteforce_n: usize,
    pub dw_terminals: usize,
    pub otc_n: usize,
    pub gap_rounds: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            vertex_vars: 40,
            vertex_rows: 5000,
            integer_n: 8,
            bruteforce_n: 10,
            dw_terminals: 12,
            otc_n: 8,
            gap_rounds: 10_000,
        }
    }
}

impl Guards {
    pub fn off() -> Self {
        Guards {
            vertex_vars: usize::MAX,
            vertex_rows: usize::MAX,
            integer_n: usize::MAX,
            bruteforce_n: usize::MAX,
            dw_terminals: 20,
            otc_n: usize::MAX,
            gap_rounds: usize::MAX,
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("off") {
            return Ok(Self::off());
        }
        let mut g = Self::default();
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("guard entry {item:?} is not key=value")))?;
            let v: usize = v.trim().parse().map_err(|_| Error::Parse(format!("guard value {v:?}")))?;
            match k.trim() {
                "vertex_vars" => g.vertex_vars = v,
                "vertex_rows" => g.vertex_rows = v,
                "integer_n" => g.integer_n = v,
                "bruteforce_n" => g.bruteforce_n = v,
                "dw_terminals" => g.dw_terminals = v,
                "otc_n" => g.otc_n = v,
                "gap_rounds" => g.gap_rounds = v,
                other => return Err(Error::Parse(format!("unknown guard {other:?}"))),
            }
        }
        Ok(g)
    }

    /// Defaults, overridden by the environment when set.
    pub fn current() -> Self {
        match std::env::var("STEINERGAP_GUARDS") {
            Ok(s) => Self::parse(&s).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }
}

pub fn check(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::Guard { what, value, limit })
    } else {
        Ok(())
    }
}
