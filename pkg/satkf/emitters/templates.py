"""Markdown skeletons for the emitted reports"""

from textwrap import dedent

MSEE_TABLE_TEMPLATE = dedent(
    """\
    ### MSEE Γ per run, measurement {mtype}

    {table}
    """
)

AMSEE_TABLE_TEMPLATE = dedent(
    """\
    ### AMSEE comparison of Ξ_κ and Ξ_Γ

    {table}
    """
)

ARE_REPORT_TEMPLATE = dedent(
    """\
    ### Steady-state predictor, measurement {mtype}

    Iterations to tolerance {tol:g}: {iterations} (final residual {residual:.3e}, {status})

    P_inf:

    {p_table}

    K_inf: {gain}

    Spectral radius of F - K_inf H: {rho:.8f} ({verdict}){hint}

    Unobservable states: {unobservable}
    """
)
