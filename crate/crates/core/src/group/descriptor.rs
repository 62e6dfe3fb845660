//! Text descriptors naming groups, e.g. `sl2:7`, `wreath:c8:4`, `prod(cyclic:2,sym:3)`.

use super::{split_top, FiniteGroup, GroupError};
use crate::field::{FieldCtx, FieldElem};

/// Builds the group named by a descriptor.
///
/// Grammar: `cyclic:n`, `dihedral:m`, `sym:n`, `sl2:q`, `add:q`, `units:q:k`,
/// `wreath:c<a>:n` (the `c` is optional), `frob80`, `bilinear:q:n[:w]`,
/// `prod(d1,d2,...)`, `power(d,k)`.
///
/// For `bilinear:q:2:w` the form is `diag(1, -w)`, where `w` is a packed field
/// index and defaults to the smallest non-square. Other `n` use the identity form.
pub fn parse_descriptor(s: &str) -> Result<FiniteGroup, GroupError> {
    let s = s.trim();
    let err = || GroupError::Parse(s.to_string());
    if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
        let factors = split_top(inner, ',')
            .into_iter()
            .map(parse_descriptor)
            .collect::<Result<Vec<_>, _>>()?;
        return FiniteGroup::direct_product(&factors);
    }
    if let Some(inner) = s.strip_prefix("power(").and_then(|r| r.strip_suffix(')')) {
        let parts = split_top(inner, ',');
        let [base, k] = parts.as_slice() else {
            return Err(err());
        };
        let k: usize = k.parse().map_err(|_| err())?;
        return FiniteGroup::power(&parse_descriptor(base)?, k);
    }
    if s == "frob80" {
        return FiniteGroup::frobenius80();
    }
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<u32, GroupError> {
        parts.get(i).and_then(|t| t.trim().parse().ok()).ok_or_else(err)
    };
    match (parts[0], parts.len()) {
        ("cyclic", 2) => FiniteGroup::cyclic(num(1)?),
        ("dihedral", 2) => FiniteGroup::dihedral(num(1)?),
        ("sym", 2) => FiniteGroup::symmetric(num(1)? as usize),
        ("sl2", 2) => FiniteGroup::sl2(&FieldCtx::with_order(num(1)?)?),
        ("add", 2) => Ok(FiniteGroup::field_additive(&FieldCtx::with_order(num(1)?)?)),
        ("units", 3) => FiniteGroup::field_units(&FieldCtx::with_order(num(1)?)?, num(2)?),
        ("wreath", 3) => {
            let a: u32 = parts[1].trim_start_matches('c').parse().map_err(|_| err())?;
            FiniteGroup::wreath(&FiniteGroup::cyclic(a)?, num(2)? as usize)
        }
        ("bilinear", 3 | 4) => {
            let field = FieldCtx::with_order(num(1)?)?;
            let n = num(2)? as usize;
            let w = if parts.len() == 4 {
                Some(field.elem(num(3)?).ok_or_else(err)?)
            } else {
                None
            };
            let form = bilinear_form(&field, n, w)?;
            FiniteGroup::bilinear(&field, n, &form)
        }
        _ => Err(err()),
    }
}

/// The form used by `bilinear:q:n[:w]`.
pub fn bilinear_form(field: &FieldCtx, n: usize, w: Option<FieldElem>) -> Result<Vec<FieldElem>, GroupError> {
    if n == 2 {
        let w = match w {
            Some(w) => w,
            None => field.smallest_non_square().ok_or_else(|| {
                GroupError::InvalidParameter(format!("F_{} has no non-square", field.order()))
            })?,
        };
        return Ok(vec![field.one(), field.zero(), field.zero(), field.neg(w)]);
    }
    if w.is_some() {
        return Err(GroupError::InvalidParameter("w is only meaningful for n = 2".into()));
    }
    Ok((0..n * n).map(|i| if i % (n + 1) == 0 { field.one() } else { field.zero() }).collect())
}

pub(super) fn bilinear_descriptor(field: &FieldCtx, n: usize, form: &[FieldElem]) -> String {
    let q = field.order();
    if n == 2 && form[0] == field.one() && form[1] == field.zero() {
        let w = field.neg(form[3]);
        if Some(w) == field.smallest_non_square() {
            return format!("bilinear:{q}:2");
        }
        return format!("bilinear:{q}:2:{}", w.index());
    }
    if n != 2 && bilinear_form(field, n, None).is_ok_and(|id| id == form) {
        return format!("bilinear:{q}:{n}");
    }
    let entries: Vec<String> = form.iter().map(|e| e.index().to_string()).collect();
    format!("bilinear:{q}:{n}:form[{}]", entries.join(" "))
}
