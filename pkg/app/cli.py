#!/usr/bin/python3
"""
Provability Logic Workbench

SPDX-License-Identifier: MIT

Copyright (C) 2023-2024 Provability Logic Workbench developers

Authors:
  - Provability Logic Workbench developers
"""
import argparse
import json
import logging
import os
import sys

from dotenv import load_dotenv

from config import ConfigurationError, get_seed
from corpus import model_sample
from countermodel import (
    countermodel_table,
    countermodel_to_json,
    extract_countermodel,
    verify_countermodel,
)
from cutelim import (
    CutReductionError,
    EmbeddingError,
    as_labelled_proof,
    degree_of,
    embed_multisuccedent,
    reduce_to_labelled,
)
from cyclic_proof import (
    CertificateError,
    TransportError,
    check_local,
    check_progress,
    load_proof,
    proof_table,
    proof_to_json,
    to_dot,
)
from formula import (
    FormulaSyntaxError,
    parse_formula,
    render_first_order,
    standard_translation,
)
from global_variables import (
    EXIT_OK,
    EXIT_REFUTED,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    JSON_INDENT,
    MAX_ENUMERATION_WORLDS,
    MAX_HEIGHT,
    MAX_REDUCTION_STEPS,
    ROOT_LABEL,
    SYSTEM_ALIASES,
)
from prover import (
    COMPANION_POLICIES,
    Provable,
    Refutable,
    SearchConfig,
    denier_to_json,
    load_denier,
    prove,
)
from semantics import (
    ModelError,
    birel_satisfies,
    enumerate_igl_models,
    entry_world_table,
    example3_model,
    load_model,
    model_table,
    model_to_dot,
    model_to_json,
)
from sequent_calculus import LabelledFormula, Sequent, SystemId

logger = logging.getLogger(__name__)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    '''argparse with usage errors raised instead of exiting with status 2'''

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    shared = _Parser(add_help=False)
    shared.add_argument(
        '--logging-level', type=str,
        help="Level of detail output to logs: \
             DEBUG, INFO, WARNING, ERROR, CRITICAL",
        # use the env variable as default log level (if specified)
        default=str(os.getenv('LOG_LEVEL', 'INFO'))
    )
    shared.add_argument(
        '--pretty', action='store_true',
        help='Print tables instead of JSON'
    )
    shared.add_argument(
        '--dot', type=str, default=None,
        help='Also write a DOT rendering of the proof or model to this file'
    )
    shared.add_argument(
        '--output', '-o', type=str, default=None,
        help='Write the JSON result to this file instead of stdout'
    )
    parser = _Parser(
        description='Provability Logic Workbench: cyclic proofs and '
                    'countermodels for GL and IGL'
    )
    commands = parser.add_subparsers(dest='command', required=True,
                                     parser_class=_Parser)

    prove_cmd = commands.add_parser('prove', parents=[shared],
                                    help='Search for a proof')
    prove_cmd.add_argument('-f', '--formula', required=True)
    prove_cmd.add_argument('--system', default='igl',
                           choices=sorted(SYSTEM_ALIASES))
    prove_cmd.add_argument('--max-labels', type=int, default=None)
    prove_cmd.add_argument('--max-depth', type=int, default=None)
    prove_cmd.add_argument('--max-steps', type=int, default=None)
    prove_cmd.add_argument('--companion-policy', default='ancestors_only',
                           choices=sorted(COMPANION_POLICIES))
    prove_cmd.add_argument('--denier', type=str, default=None,
                           help='Write the Denier tree of a refutation here')

    check_cmd = commands.add_parser('check-proof', parents=[shared],
                                    help='Check a proof certificate')
    check_cmd.add_argument('proof')

    counter_cmd = commands.add_parser('countermodel', parents=[shared],
                                      help='Countermodel from a Denier tree')
    counter_cmd.add_argument('denier')

    model_cmd = commands.add_parser('modelcheck', parents=[shared],
                                    help='Evaluate a formula in a model')
    model_cmd.add_argument('-m', '--model', default=None,
                           help='Model JSON (default: the built-in '
                                'five-world example)')
    model_cmd.add_argument('-w', '--world', required=True)
    model_cmd.add_argument('-f', '--formula', required=True)
    model_cmd.add_argument('--classical', action='store_true')

    translate_cmd = commands.add_parser('translate', parents=[shared],
                                        help='First-order standard translation')
    translate_cmd.add_argument('-f', '--formula', required=True)
    translate_cmd.add_argument('--label', default=ROOT_LABEL)

    reduce_cmd = commands.add_parser('reduce-cut', parents=[shared],
                                     help='Reduce disjunctive cuts of a proof')
    reduce_cmd.add_argument('proof')
    reduce_cmd.add_argument('--max-height', type=int, default=MAX_HEIGHT)
    reduce_cmd.add_argument('--max-steps', type=int,
                            default=MAX_REDUCTION_STEPS)
    reduce_cmd.add_argument('--trace', action='store_true',
                            help='Print the applied reductions')

    enum_cmd = commands.add_parser('enumerate-models', parents=[shared],
                                   help='List IGL models')
    enum_cmd.add_argument('--max-worlds', type=int,
                          default=MAX_ENUMERATION_WORLDS)
    enum_cmd.add_argument('--atoms', default='p',
                          help='Comma separated atom names')
    enum_cmd.add_argument('--sample', type=int, default=None,
                          help='Draw this many random models instead')
    enum_cmd.add_argument('--seed', type=int, default=None,
                          help='Seed for --sample (default IGL_SEED)')
    return parser


def _dump(data, args, out):
    text = json.dumps(data, indent=JSON_INDENT, sort_keys=True)
    if args.output:
        with open(args.output, 'w', encoding='utf-8') as target:
            target.write(text + '\n')
        logger.info("Wrote %s", args.output)
    else:
        print(text, file=out)


def _write_dot(args, text):
    if args.dot:
        with open(args.dot, 'w', encoding='utf-8') as target:
            target.write(text)


def _proof_report(p):
    problems = check_local(p)
    report = check_progress(p)
    return problems, report


def cmd_prove(args, out):
    system = SystemId(SYSTEM_ALIASES[args.system])
    cfg = SearchConfig.from_defaults(
        system, max_labels=args.max_labels, max_depth=args.max_depth,
        max_steps=args.max_steps, companion_policy=args.companion_policy)
    goal = parse_formula(args.formula)
    outcome = prove(goal, cfg)
    print(outcome.status, file=out)
    if isinstance(outcome, Provable):
        if outcome.system is not system:
            logger.warning("No %s proof found; the certificate checks in %s",
                           system.value, outcome.system.value)
        if args.pretty:
            print(proof_table(outcome.proof).to_string(index=False), file=out)
        else:
            _dump(proof_to_json(outcome.proof), args, out)
        _write_dot(args, to_dot(outcome.proof))
        return EXIT_OK
    if isinstance(outcome, Refutable):
        if outcome.denier is None:
            if outcome.saturated is not None:
                print(f"saturated: {outcome.saturated}", file=out)
            return EXIT_REFUTED
        if args.denier:
            with open(args.denier, 'w', encoding='utf-8') as target:
                json.dump(denier_to_json(outcome.denier), target,
                          indent=JSON_INDENT)
        model = extract_countermodel(outcome.denier)
        verdict = verify_countermodel(*model, goal, model.saturated)
        for failure in verdict.failures:
            logger.warning("Countermodel check: %s", failure)
        if args.pretty:
            print(countermodel_table(model).to_string(index=False), file=out)
        else:
            _dump(countermodel_to_json(model), args, out)
        return EXIT_REFUTED
    print(outcome.reason, file=out)
    return EXIT_UNKNOWN


def cmd_check_proof(args, out):
    p = load_proof(args.proof)
    problems, report = _proof_report(p)
    for problem in problems:
        print(problem, file=out)
    if not report.progressing:
        print(f"non-progressing cycle: {' '.join(report.witness or [])}",
              file=out)
    valid = not problems and report.progressing
    print('valid' if valid else 'invalid', file=out)
    return EXIT_OK if valid else EXIT_REFUTED


def cmd_countermodel(args, out):
    tree = load_denier(args.denier)
    model = extract_countermodel(tree)
    goal = tree.nodes[tree.root].run[0].rhs[0].formula
    verdict = verify_countermodel(*model, goal, model.saturated)
    if args.pretty:
        print(countermodel_table(model).to_string(index=False), file=out)
    else:
        _dump(countermodel_to_json(model), args, out)
    for failure in verdict.failures:
        print(failure, file=out)
    print('verified' if verdict.ok else 'not verified', file=out)
    return EXIT_OK if verdict.ok else EXIT_REFUTED


def cmd_modelcheck(args, out):
    m = load_model(args.model) if args.model else example3_model()
    goal = parse_formula(args.formula)
    holds = birel_satisfies(m, args.world, goal, classical=args.classical)
    if args.pretty:
        s = Sequent(frozenset(), (), (LabelledFormula(ROOT_LABEL, goal),))
        print(entry_world_table(m, {ROOT_LABEL: args.world}, s)
              .to_string(index=False), file=out)
    _write_dot(args, model_to_dot(m))
    print('true' if holds else 'false', file=out)
    return EXIT_OK if holds else EXIT_REFUTED


def cmd_translate(args, out):
    goal = parse_formula(args.formula)
    print(render_first_order(standard_translation(args.label, goal)),
          file=out)
    return EXIT_OK


def cmd_reduce_cut(args, out):
    p = load_proof(args.proof)
    if p.system not in (SystemId.IK4, SystemId.dIK4):
        p = embed_multisuccedent(p)
    logger.info("Input degree %d", degree_of(p))
    result = reduce_to_labelled(p, args.max_height, args.max_steps)
    if args.trace:
        for item in result.trace:
            print(f"{item['cut']}: {item['case']} (degree {item['degree']})",
                  file=out)
    if not result.finished:
        print('Unfinished', file=out)
        return EXIT_UNKNOWN
    reduced = result.proof
    try:
        reduced = as_labelled_proof(reduced)
    except CutReductionError:
        logger.debug("Reduced proof still carries disjunctions")
    if args.pretty:
        print(proof_table(reduced).to_string(index=False), file=out)
    else:
        _dump(proof_to_json(reduced), args, out)
    _write_dot(args, to_dot(reduced))
    return EXIT_OK


def cmd_enumerate_models(args, out):
    atoms = [a.strip() for a in args.atoms.split(',') if a.strip()]
    if args.sample is not None:
        seed = get_seed() if args.seed is None else args.seed
        models = model_sample(args.sample, args.max_worlds, atoms, seed)
    else:
        models = enumerate_igl_models(args.max_worlds, atoms)
    for m in models:
        if args.pretty:
            print(model_table(m).to_string(index=False), file=out)
            print(file=out)
        else:
            print(json.dumps(model_to_json(m), sort_keys=True), file=out)
    return EXIT_OK


COMMANDS = {
    'prove': cmd_prove,
    'check-proof': cmd_check_proof,
    'countermodel': cmd_countermodel,
    'modelcheck': cmd_modelcheck,
    'translate': cmd_translate,
    'reduce-cut': cmd_reduce_cut,
    'enumerate-models': cmd_enumerate_models,
}


def run(argv, out=None):
    """
    Run one command.

    Returns:
        int: exit code, 0 ok / provable, 1 refutable / invalid,
        2 unknown / unfinished, 3 usage error.
    """
    out = out or sys.stdout
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging_level = getattr(logging, args.logging_level.upper(), logging.INFO)
    logging.basicConfig(
        level=logging_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    try:
        return COMMANDS[args.command](args, out)
    except (EmbeddingError, CutReductionError, TransportError) as e:
        logger.error("%s", e)
        print(f"invalid: {e}", file=out)
        return EXIT_REFUTED
    except (FormulaSyntaxError, CertificateError, ConfigurationError,
            ModelError, OSError, json.JSONDecodeError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
