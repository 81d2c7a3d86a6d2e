from .fixtures import FIXTURE_DIR, FIXTURES, GOLDEN_KEYS, GOLDEN_SETTINGS, fixture_path, load_all_fixtures, load_fixture, load_goldens
from .report import REPORT_FORMATS, SCHEMA_VERSION, assertion, build_report, emit_report, render_report, report_passed
from .verify import (
    SELECTORS,
    gat_reference,
    gcn_reference,
    golden_configs,
    golden_reference,
    lgc_reference,
    matrix_fidelity,
    mpnn_reference,
    sgc_reference,
    verify_suite,
)
