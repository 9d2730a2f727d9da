"""Secure distributed matrix multiplication over hyperelliptic-curve evaluation codes."""

from .analysis import (
    AgWorkerCount,
    DegreeTableReport,
    SchemeRateRow,
    SweepPoint,
    SweepSummary,
    compare_sweep,
    degree_table_report,
    format_sweep_csv,
    parse_sweep_csv,
    workers_a3s,
    workers_ag,
    workers_gasp_big,
    write_sweep_csv,
)
from .field import FieldElement, PrimeField, is_prime
from .function_field import (
    HyperellipticCurve,
    Monomial,
    Place,
    WeierstrassSemigroup,
    make_curve,
)
from .linalg import (
    LUFactorization,
    SingularMatrixError,
    all_square_submatrices_invertible,
    matmul_mod,
    rank,
    select_information_columns,
    solve,
)
from .protocol import (
    CollusionView,
    SecrecyAuditReport,
    Transcript,
    WorkerRecord,
    collude_view,
    decode_response_pairs,
    empirical_secrecy_audit,
    run_protocol,
)
from .scheme import (
    EncodedShares,
    PoleStructure,
    SchemeInstance,
    SchemeParams,
    build_scheme,
    derive_parameters,
    load_scheme,
    pole_number_table,
    pole_sequences,
    read_matrix_csv,
    save_scheme,
    smallest_admissible_field,
    write_matrix_csv,
)

__version__ = "0.1.0"
