//! Written forms of finitely generated abelian groups and comparison up to
//! isomorphism.

use slitkit::{Error, HomologyGroup, Result};

/// Parses `0`, `Z`, `Z^2+Z2^3+Z3`, `Z10` and the like.
pub fn parse_group(degree: usize, text: &str) -> Result<HomologyGroup> {
    let mut group = HomologyGroup {
        degree,
        betti: 0,
        torsion: Vec::new(),
    };
    let text = text.trim();
    if text == "0" {
        return Ok(group);
    }
    for part in text.split('+') {
        let bad = || Error::Parse(format!("bad group {text:?}"));
        let part = part.trim();
        let (base, power) = match part.split_once('^') {
            Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
            None => (part, 1),
        };
        let order = base.strip_prefix('Z').ok_or_else(bad)?;
        if order.is_empty() {
            group.betti += power;
        } else {
            let t: u64 = order.parse().map_err(|_| bad())?;
            if t < 2 {
                return Err(bad());
            }
            group.torsion.extend(std::iter::repeat(t).take(power));
        }
    }
    group.torsion.sort_unstable();
    Ok(group)
}

/// Prime-power factors of `t`, ascending.
fn prime_powers(mut t: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= t {
        if t % p == 0 {
            let mut q = 1;
            while t % p == 0 {
                t /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if t > 1 {
        out.push(t);
    }
    out
}

/// Elementary divisors: `Z6 + Z2` becomes `[2, 2, 3]`.
pub fn primary_decomposition(torsion: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = torsion.iter().flat_map(|&t| prime_powers(t)).collect();
    out.sort_unstable();
    out
}

pub fn isomorphic(a: &HomologyGroup, b: &HomologyGroup) -> bool {
    a.betti == b.betti && primary_decomposition(&a.torsion) == primary_decomposition(&b.torsion)
}

/// Dimension of `H_k(-; F_p)` predicted from integral groups.
pub fn mod_p_dimensions(integral: &[HomologyGroup], p: u64) -> Vec<usize> {
    (0..integral.len())
        .map(|k| {
            let below = if k == 0 { 0 } else { integral[k - 1].p_torsion_rank(p) };
            integral[k].betti + integral[k].p_torsion_rank(p) + below
        })
        .collect()
}
