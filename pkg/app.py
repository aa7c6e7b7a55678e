"""
카테고리 용량 제약 하의 공정 분할 CLI
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from config.constants import (
    APP_DESCRIPTION,
    APP_NAME,
    CAPACITY_POLICIES,
    CHECK_EXTRA_PROPERTIES,
    ERROR_MESSAGES,
    EXIT_CODES,
    GENERATOR_DEFAULTS,
    PROPERTY_NAMES,
)
from config.fixtures import FIXTURE_ALIASES, fixture_choices, fixture_names, get_fixture, get_snapshot
from config.settings import configure_logging, load_settings
from engines.fairness import FairnessChecker
from engines.oracle import Oracle
from engines.solver import Solver
from models.documents import parse_rational
from models.errors import (
    AllocationMismatchError,
    DocumentError,
    EnumerationBudgetError,
    FairDivisionError,
    InfeasibleAllocationError,
    InvalidInstanceError,
    SolverInvariantError,
    UnsupportedAgentCountError,
)
from models.fairness_models import FairnessProperty
from models.instance_models import Allocation, Instance
from models.solver_models import WeightVector
from utils.generator import generate_instance
from utils.io_helpers import (
    allocation_to_document,
    dump_json,
    format_fraction,
    instance_to_document,
    load_allocation,
    load_instance,
    trace_to_document,
)
from utils.line_export import export_lines, lines_to_csv

logger = logging.getLogger(__name__)


def emit(document: Any):
    """stdout 은 JSON 전용"""
    print(dump_json(document))


def report_error(kind: str, error: Exception):
    print(f"{ERROR_MESSAGES.get(kind, '❌')}: {error}", file=sys.stderr)
    for detail in getattr(error, "details", []) or []:
        print(f"  - {detail}", file=sys.stderr)
    report = getattr(error, "report", None)
    if report is not None:
        for violation in report.violations:
            print(f"  - {violation.code} ({violation.location}): {violation.message}", file=sys.stderr)


def _load_valid_instance(path: str) -> Instance:
    return load_instance(path).require_valid()


def _require_feasible(instance: Instance, allocation: Allocation, allow_partial: bool = False):
    feasible = (
        instance.is_partial_feasible(allocation) if allow_partial else instance.is_feasible(allocation)
    )
    if not feasible:
        raise InfeasibleAllocationError(
            "allocation is not a feasible partition of the instance items"
            if not allow_partial
            else "allocation breaks disjointness or a capacity"
        )


def _oracle(args) -> Oracle:
    return Oracle(budget=args.budget)


def _property_summary(instance: Instance, allocation: Allocation) -> Dict[str, bool]:
    checker = FairnessChecker()
    return {
        prop.value: checker.check(instance, allocation, prop).holds for prop in FairnessProperty
    }


# ----------------------------------------------------------------------
# solve
# ----------------------------------------------------------------------


def run_solve(args) -> int:
    """EF[1,1] + PO 할당 계산"""
    instance = _load_valid_instance(args.instance)
    if instance.n != 2:
        raise UnsupportedAgentCountError(instance.n)

    certify_steps = False if args.no_certify_steps else None
    solver = Solver(certify_steps=certify_steps)
    try:
        allocation, trace = solver.solve(instance)
    except SolverInvariantError as e:
        if e.trace is not None:
            partial = trace_to_document(e.trace, instance.pad_with_dummies())
            if args.trace:
                dump_json(partial, args.trace)
            else:
                print(dump_json(partial), file=sys.stderr)
        raise

    if args.trace:
        dump_json(trace_to_document(trace, instance.pad_with_dummies()), args.trace)
    if args.output:
        dump_json(allocation_to_document(allocation, instance), args.output)

    result: Dict[str, Any] = {
        "allocation": allocation_to_document(allocation, instance)["bundles"],
        "exchanges": len(trace.exchanges),
        "properties": _property_summary(instance, allocation),
    }
    if args.certify:
        result["certificate"] = _certify(instance, allocation, _oracle(args))
    emit(result)
    return EXIT_CODES["ok"]


def _certify(instance: Instance, allocation: Allocation, oracle: Oracle) -> Dict[str, Any]:
    count = oracle.count_feasible(instance)
    if count > oracle.budget:
        return {"skipped": f"{count} allocations exceed the enumeration budget {oracle.budget}"}
    certificate: Dict[str, Any] = {
        "enumerated": count,
        "po": oracle.is_pareto_optimal(instance, allocation),
        "ef1_exists": oracle.find_allocation(instance, [FairnessProperty.EF1]) is not None,
    }
    if not certificate["ef1_exists"]:
        certificate["note"] = "no EF1 allocation exists"
    return certificate


# ----------------------------------------------------------------------
# check
# ----------------------------------------------------------------------


def run_check(args) -> int:
    """할당 하나에 대한 속성 판정"""
    instance = _load_valid_instance(args.instance)
    allocation = load_allocation(args.allocation)
    _require_feasible(instance, allocation, args.allow_partial)
    checker = FairnessChecker()

    if args.property == "envy-graph":
        emit({"property": args.property, **checker.envy_graph(instance, allocation).to_dict()})
        return EXIT_CODES["ok"]
    if args.property == "top-trading":
        emit({"property": args.property, **checker.top_trading_graph(instance, allocation).to_dict()})
        return EXIT_CODES["ok"]
    if args.property == "po":
        return _emit_po(instance, allocation, _oracle(args))

    verdict = checker.check(instance, allocation, FairnessProperty(args.property))
    emit(verdict.to_dict())
    return EXIT_CODES["ok"] if verdict.holds else EXIT_CODES["property_fails"]


def _emit_po(instance: Instance, allocation: Allocation, oracle: Oracle) -> int:
    holds = oracle.is_pareto_optimal(instance, allocation)
    emit({"property": "po", "holds": holds, "enumerated": oracle.count_feasible(instance)})
    return EXIT_CODES["ok"] if holds else EXIT_CODES["property_fails"]


# ----------------------------------------------------------------------
# oracle
# ----------------------------------------------------------------------


def _parse_weights(raw: str, instance: Instance) -> WeightVector:
    try:
        values = [parse_rational(part.strip()) for part in raw.split(",")]
    except ValueError as e:
        raise DocumentError(f"--weights: {e}") from e
    if len(values) != instance.n:
        raise DocumentError(f"--weights lists {len(values)} values for {instance.n} agents")
    return WeightVector(dict(zip(instance.agents, values)))


def run_oracle(args) -> int:
    """전수 열거 기반 인증"""
    instance = _load_valid_instance(args.instance)
    oracle = _oracle(args)

    if args.action == "find":
        properties = args.property or ["ef11", "po"]
        found = oracle.find_allocation(instance, properties)
        emit(
            {
                "properties": properties,
                "found": found is not None,
                "allocation": allocation_to_document(found, instance)["bundles"] if found else None,
                "enumerated": oracle.count_feasible(instance),
            }
        )
        return EXIT_CODES["ok"] if found is not None else EXIT_CODES["property_fails"]

    if args.action == "po":
        allocation = load_allocation(_require_arg(args.allocation, "po needs --allocation"))
        _require_feasible(instance, allocation)
        return _emit_po(instance, allocation, oracle)

    if args.action == "wmax":
        weights = (
            _parse_weights(args.weights, instance) if args.weights else WeightVector.equal(instance.agents)
        )
        best, winners = oracle.brute_force_w_maximal(instance, weights)
        emit(
            {
                "weights": {agent: format_fraction(value) for agent, value in weights.weights.items()},
                "max": format_fraction(best),
                "argmax": [allocation_to_document(a, instance)["bundles"] for a in winners],
            }
        )
        return EXIT_CODES["ok"]

    source = load_allocation(_require_arg(args.allocation, "cycles needs --allocation"))
    target = load_allocation(_require_arg(args.target, "cycles needs --target"))
    _require_feasible(instance, source)
    _require_feasible(instance, target)
    cycles = oracle.exchange_cycle_decomposition(instance, source, target)
    emit(
        {
            "cycles": [
                {"agents": list(cycle.agents), "items": list(cycle.items), "category": cycle.category}
                for cycle in cycles
            ]
        }
    )
    return EXIT_CODES["ok"]


def _require_arg(value: Optional[str], message: str) -> str:
    if not value:
        raise DocumentError(message)
    return value


# ----------------------------------------------------------------------
# gen / fixtures / lines
# ----------------------------------------------------------------------


def run_gen(args) -> int:
    instance = generate_instance(
        seed=args.seed,
        agents=args.agents,
        category_sizes=args.sizes,
        capacity_policy=args.capacity_policy,
        capacities=args.capacities,
        utility_low=args.low,
        utility_high=args.high,
        same_sign=args.same_sign,
    )
    document = instance_to_document(instance)
    if args.output:
        dump_json(document, args.output)
    emit(document)
    return EXIT_CODES["ok"]


def emit_fixture(name: str, snapshot: Optional[str] = None) -> Dict[str, Any]:
    """예제 인스턴스 문서 (snapshot 을 주면 해당 할당 문서)"""
    if snapshot:
        return get_snapshot(name, snapshot)
    return get_fixture(name)["instance"]


def run_fixtures(args) -> int:
    if args.list or not args.name:
        emit(
            {
                name: {
                    "description": get_fixture(name)["description"],
                    "aliases": [alias for alias, target in FIXTURE_ALIASES.items() if target == name],
                    "snapshots": list(get_fixture(name)["snapshots"]),
                }
                for name in fixture_names()
            }
        )
        return EXIT_CODES["ok"]
    document = emit_fixture(args.name, args.snapshot)
    if args.output:
        dump_json(document, args.output)
    emit(document)
    return EXIT_CODES["ok"]


def run_lines(args) -> int:
    instance = _load_valid_instance(args.instance)
    export = export_lines(instance)
    if args.format == "csv":
        sys.stdout.write(lines_to_csv(export))
    else:
        emit(export)
    return EXIT_CODES["ok"]


# ----------------------------------------------------------------------
# 파서
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=APP_NAME, description=APP_DESCRIPTION)
    parser.add_argument("--log-level", default=None, help="로그 레벨 (기본: FAIRDIV_LOG_LEVEL)")
    parser.add_argument("--budget", type=int, default=None, help="오라클 열거 예산")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="EF[1,1] + PO 할당 계산")
    solve.add_argument("instance")
    solve.add_argument("--trace", help="트레이스 JSON 경로")
    solve.add_argument("--output", help="할당 JSON 경로")
    solve.add_argument("--certify", action="store_true", help="오라클로 PO / EF1 존재 여부 인증")
    solve.add_argument("--no-certify-steps", action="store_true", help="교환마다의 w-maximal 인증 생략")
    solve.set_defaults(handler=run_solve)

    check = subparsers.add_parser("check", help="할당 속성 판정")
    check.add_argument("instance")
    check.add_argument("allocation")
    check.add_argument("--property", required=True, choices=PROPERTY_NAMES + CHECK_EXTRA_PROPERTIES)
    check.add_argument("--allow-partial", action="store_true", help="부분 할당(중간 상태) 허용")
    check.set_defaults(handler=run_check)

    oracle = subparsers.add_parser("oracle", help="전수 열거 인증")
    oracle.add_argument("action", choices=["find", "po", "wmax", "cycles"])
    oracle.add_argument("instance")
    oracle.add_argument("--property", action="append", choices=PROPERTY_NAMES + ["po"])
    oracle.add_argument("--allocation", help="po / cycles 의 기준 할당")
    oracle.add_argument("--target", help="cycles 의 목표 할당")
    oracle.add_argument("--weights", help="에이전트 순서의 가중치, 예: 1/3,2/3")
    oracle.set_defaults(handler=run_oracle)

    gen = subparsers.add_parser("gen", help="랜덤 인스턴스 생성")
    gen.add_argument("--seed", type=int, default=GENERATOR_DEFAULTS["seed"])
    gen.add_argument("--agents", type=int, default=GENERATOR_DEFAULTS["agents"])
    gen.add_argument("--sizes", type=int, nargs="+", default=GENERATOR_DEFAULTS["category_sizes"])
    gen.add_argument("--capacity-policy", choices=CAPACITY_POLICIES, default=GENERATOR_DEFAULTS["capacity_policy"])
    gen.add_argument("--capacities", type=int, nargs="+")
    gen.add_argument("--low", type=int, default=GENERATOR_DEFAULTS["utility_low"])
    gen.add_argument("--high", type=int, default=GENERATOR_DEFAULTS["utility_high"])
    gen.add_argument("--same-sign", action="store_true")
    gen.add_argument("--output")
    gen.set_defaults(handler=run_gen)

    fixtures = subparsers.add_parser("fixtures", help="내장 예제 출력")
    fixtures.add_argument("name", nargs="?", choices=fixture_choices())
    fixtures.add_argument("--list", action="store_true")
    fixtures.add_argument("--snapshot")
    fixtures.add_argument("--output")
    fixtures.set_defaults(handler=run_fixtures)

    lines = subparsers.add_parser("lines", help="아이템 직선과 교차점 내보내기")
    lines.add_argument("instance")
    lines.add_argument("--format", choices=["json", "csv"], default="json")
    lines.set_defaults(handler=run_lines)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """메인 함수"""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    if args.budget is None:
        args.budget = load_settings().enumeration_budget

    try:
        return args.handler(args)
    except UnsupportedAgentCountError as e:
        report_error("agent_count", e)
        return EXIT_CODES["agent_count"]
    except SolverInvariantError as e:
        report_error("invariant", e)
        return EXIT_CODES["invariant"]
    except EnumerationBudgetError as e:
        report_error("budget", e)
        return EXIT_CODES["budget"]
    except InfeasibleAllocationError as e:
        report_error("infeasible", e)
        return EXIT_CODES["schema_error"]
    except (DocumentError, InvalidInstanceError, AllocationMismatchError) as e:
        report_error("schema", e)
        return EXIT_CODES["schema_error"]
    except FairDivisionError as e:
        report_error("schema", e)
        logger.debug("unclassified domain error", exc_info=True)
        return EXIT_CODES["schema_error"]


if __name__ == "__main__":
    sys.exit(main())
