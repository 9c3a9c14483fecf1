import logging

from .choices import Family
from .conf import get_optimizer_config
from .measures import negativity, teleportation_measures
from .monogamy import (
    capability_residual,
    ksp_pair_negativity,
    ksp_residual,
    negativity_residual,
    one_vs_rest_negativity,
    oup_pair_negativity,
    oup_residual,
)
from .quantum_states import Cut, density_from_state, marginal, named_state, resolve_state_name
from .serializers import ReportSerializer

logger = logging.getLogger(__name__)

ONE_VS_REST_READING = (
    'the a(bc) cut is not a d x d resource; its capability is taken as the '
    'pure-state negativity, which equals the capability of two-qudit pure states'
)


def _spectrum(rho):
    return [float(x) for x in rho.spectrum()[::-1]]


def _analytic_values(name, p):
    if name == Family.OU_P:
        return {'n_a_bc': one_vs_rest_negativity(p), 'n_ab': oup_pair_negativity(p), 'residual': oup_residual(p)}
    if name == Family.KS_P:
        return {'n_a_bc': one_vs_rest_negativity(p), 'n_ab': ksp_pair_negativity(p), 'residual': ksp_residual(p)}
    return None


def _two_party_report(psi, cfg):
    rho = density_from_state(psi)
    results = [negativity(rho)]
    if psi.dims[0] == psi.dims[1]:
        results.extend(teleportation_measures(rho, cfg))
    payload = {
        'cuts': {'negativity': Cut.of({0}, 2).label()},
        'marginal_spectra': {'1': _spectrum(marginal(psi, [0]))},
        'measures': results,
    }
    payload.update({result.name: result.value for result in results})
    return payload


def _three_party_report(psi, focus, cfg):
    record = negativity_residual(psi, focus)
    a = focus + 1
    b, c = [j + 1 for j in range(3) if j != focus]
    payload = {
        'cuts': {
            'n_a_bc': Cut.of({focus}, 3).label(),
            'n_ab': f"{a}{b}",
            'n_ac': f"{a}{c}",
        },
        'n_a_bc': record.n_a_bc,
        'n_ab': record.n_ab,
        'n_ac': record.n_ac,
        'lhs': record.lhs,
        'residual': record.residual,
        'marginal_spectra': {
            str(a): _spectrum(marginal(psi, [focus])),
            f"{a}{b}": _spectrum(marginal(psi, [focus, b - 1])),
            f"{a}{c}": _spectrum(marginal(psi, [focus, c - 1])),
        },
    }
    if len(set(psi.dims)) == 1:
        capability = capability_residual(psi, focus, cfg)
        payload['capability'] = {
            't_a_bc': capability.n_a_bc,
            't_ab': capability.n_ab,
            't_ac': capability.n_ac,
            'residual': capability.residual,
            'one_vs_rest_reading': ONE_VS_REST_READING,
        }
    return payload


def build_report(name, p=None, d=3, focus=0, cfg=None):
    """Negativities, capabilities and marginal spectra of a named state, ready for JSON."""
    cfg = cfg or get_optimizer_config()
    name = resolve_state_name(name)
    psi = named_state(name, p, d)
    logger.info(f"Report for {name} (p={p}, d={d}, focus={focus + 1})")
    payload = {
        'state': name,
        'p': None if p is None else float(p),
        'dims': list(psi.dims),
        'focus': focus + 1,
    }
    if psi.n_subsystems == 2:
        payload.update(_two_party_report(psi, cfg))
    else:
        payload.update(_three_party_report(psi, focus, cfg))
    analytic = _analytic_values(name, p) if p is not None else None
    if analytic is not None:
        payload['analytic'] = analytic
    return ReportSerializer(payload).data
