"""BSS machines, K-Turing machines, and the compiler between them."""

from .bss import (
    KERNEL,
    Asm,
    BssProgram,
    BssState,
    BssStats,
    MachineError,
    Node,
    StepLimitExceeded,
    bss_run,
    input_state,
    load_program,
    output_of,
    program_from_doc,
    program_to_doc,
    run_state,
    save_program,
    validate_program,
)
from .gapinit import gap_init, predicted_steps
from .ktm import (
    KtmProgram,
    KtmStats,
    Transition,
    Write,
    check_ktm,
    ktm_from_doc,
    ktm_run,
    ktm_to_doc,
    load_ktm,
    validate_ktm,
)
from .ktm_compiler import ktm_to_bss

FIXTURE_KTMS = ("identity", "register_multiply", "threshold")


def fixture_path(name: str):
    from importlib import resources

    return resources.files(__package__).joinpath("fixtures").joinpath(name)


def fixture_ktm(name: str) -> KtmProgram:
    import json

    return ktm_from_doc(json.loads(fixture_path(f"ktm_{name}.json").read_text()))
