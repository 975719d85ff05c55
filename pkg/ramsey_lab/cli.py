"""The ``lab`` command line."""
import argparse
import json
import logging
import os
import sys

from django.core.exceptions import ImproperlyConfigured
from django.test import override_settings

from ramsey_lab.census import census
from ramsey_lab.collages import extract_core, is_very_well_behaved, is_well_behaved, maximal_collages
from ramsey_lab.colourings import (RED, find_triangle_free_colouring, is_t_good, obstruction_report,
                                   read_colouring, write_colouring)
from ramsey_lab.conf import configure, configure_from_file, settings
from ramsey_lab.density import completion_threshold, janson_params
from ramsey_lab.exceptions import RamseyGraph, RamseyLabError, SearchBudgetExhausted
from ramsey_lab.games import (GameTranscript, StrategySpec, Variant, first_round_colouring, replay_transcript,
                              two_round_game)
from ramsey_lab.graphs import EdgeSubset, RngSpec, read_edge_list
from ramsey_lab.lab import SweepConfig, run_sweep, write_csv, write_json

logger = logging.getLogger(__name__)


def _emit(data):
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + '\n')


def cmd_census(args):
    g = read_edge_list(args.graph)
    print('pattern,count')
    for name, count in census(g, args.pattern).items():
        print('%s,%d' % (name, count))
    return 0


def cmd_colour(args):
    g = read_edge_list(args.graph)
    try:
        phi = find_triangle_free_colouring(g, budget=args.budget)
    except SearchBudgetExhausted as exc:
        logger.error('unknown: %s', exc)
        return 3
    except RamseyGraph as exc:
        logger.error('impossible: %s', exc)
        return 2
    write_colouring(phi, args.out)
    if args.report:
        with open(args.report, 'w', encoding='utf-8') as f:
            json.dump(obstruction_report(phi).to_dict(), f, indent=2, sort_keys=True)
    return 0


def cmd_collage(args):
    g = read_edge_list(args.graph)
    base = args.collage_log_base or settings.LOG_BASE
    print('id,edges,vertices,well_behaved,very_well_behaved,density')
    with override_settings(LOG_BASE=base):
        for index, c in enumerate(maximal_collages(g)):
            well = is_well_behaved(c, density_mode=args.density_mode)
            very = is_very_well_behaved(c, density_mode=args.density_mode)
            print('%d,%d,%d,%s,%s,%s' % (index, c.e, c.v, well.status, very.status, c.density))
    return 0


def cmd_core(args):
    g = read_edge_list(args.graph)
    collages = maximal_collages(g)
    if not 0 <= args.collage < len(collages):
        logger.error('collage %d does not exist, the graph has %d', args.collage, len(collages))
        return 1
    core, log = extract_core(collages[args.collage])
    data = log.to_dict()
    data['collage'] = args.collage
    data['core'] = [list(edge) for edge in core]
    data['claim_violations'] = [step._asdict() for step in log.claim_violations()]
    data['l_o_nondecreasing'] = log.l_o_nondecreasing
    _emit(data)
    return 0


def cmd_vgc(args):
    g = read_edge_list(args.graph)
    phi = first_round_colouring(g, StrategySpec(density_mode=args.density_mode))
    write_colouring(phi, args.out)
    verdict = is_t_good(phi, 1)
    report = obstruction_report(phi).to_dict()
    report['very_good'] = verdict.good
    report['failed_condition'] = verdict.condition
    _emit(report)
    return 0


def cmd_play(args):
    strategy = StrategySpec(variant=args.strategy, budget=args.budget)
    rows = []
    for trial in range(args.trials):
        transcript = two_round_game(args.n, args.p, args.q, strategy, RngSpec(args.seed, trial),
                                    arrival=args.arrival, model=args.model, m1=args.m1, m2=args.m2)
        if args.transcripts:
            os.makedirs(args.transcripts, exist_ok=True)
            with open(os.path.join(args.transcripts, '%d.json' % trial), 'w', encoding='utf-8') as f:
                f.write(transcript.to_json())
        rows.append({
            'trial': trial,
            'outcome': transcript.outcome,
            'failure_edge': transcript.failure_edge,
            'new_edges': len(transcript.order),
        })
    if args.emit == 'json':
        _emit(rows)
    else:
        print('trial,outcome,failure_edge,new_edges')
        for row in rows:
            edge = '' if row['failure_edge'] is None else '%d-%d' % row['failure_edge']
            print('%d,%s,%s,%d' % (row['trial'], row['outcome'], edge, row['new_edges']))
    return 0


def cmd_analyze(args):
    g = read_edge_list(args.graph)
    phi = read_colouring(g, args.colouring)
    red = EdgeSubset(g.n, phi.edges_of(RED))
    _emit(janson_params(red, g.n, args.p).to_dict())
    return 0


def cmd_threshold(args):
    _emit(completion_threshold(args.n, args.p)._asdict())
    return 0


def cmd_sweep(args):
    config = SweepConfig.from_file(args.config)
    if args.workers:
        config.workers = args.workers
    results = run_sweep(config)
    out = args.out or config.output
    if out is None:
        logger.error('no output path given')
        return 1
    if config.format == 'json':
        write_json(results, out)
    else:
        write_csv(results, out)
    return 0


def cmd_replay(args):
    with open(args.transcript, encoding='utf-8') as f:
        transcript = GameTranscript.from_json(f.read())
    fresh = replay_transcript(transcript)
    print('replayed: %s' % fresh.outcome)
    return 0


def get_parser():
    parser = argparse.ArgumentParser(prog='lab', description='Two-round triangle game laboratory.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug')
    parser.add_argument('--settings', help='JSON file of setting overrides')
    parser.add_argument('--log-base', type=float, help='base of every log n (default e)')
    commands = parser.add_subparsers(dest='command', required=True)

    sub = commands.add_parser('census', help='count pattern copies')
    sub.add_argument('graph')
    sub.add_argument('--pattern', action='append')
    sub.set_defaults(func=cmd_census)

    sub = commands.add_parser('colour', help='triangle-free colouring by search')
    sub.add_argument('graph')
    sub.add_argument('--out', required=True)
    sub.add_argument('--report')
    sub.add_argument('--budget', type=int)
    sub.set_defaults(func=cmd_colour)

    for name, func, help_text in (('collage', cmd_collage, 'list maximal collages'),
                                  ('vgc', cmd_vgc, 'colour by discharging where possible')):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument('graph')
        sub.add_argument('--density-mode', default='auto', choices=('auto', 'exact', 'sufficient'))
        if name == 'vgc':
            sub.add_argument('--out', required=True)
        else:
            sub.add_argument('--log-base', dest='collage_log_base', type=float)
        sub.set_defaults(func=func)

    sub = commands.add_parser('core', help='extract the core of one collage')
    sub.add_argument('graph')
    sub.add_argument('--collage', type=int, default=0)
    sub.set_defaults(func=cmd_core)

    sub = commands.add_parser('play', help='play two-round games')
    sub.add_argument('--n', type=int, required=True)
    sub.add_argument('--p', type=float)
    sub.add_argument('--q', type=float)
    sub.add_argument('--m1', type=int)
    sub.add_argument('--m2', type=int)
    sub.add_argument('--model', default='binomial', choices=('binomial', 'uniform'))
    sub.add_argument('--strategy', default=Variant.GOOD_COLOURING.value, choices=[v.value for v in Variant])
    sub.add_argument('--budget', type=int)
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--trials', type=int, default=1)
    sub.add_argument('--arrival', default='random', choices=('random', 'lex'))
    sub.add_argument('--emit', default='csv', choices=('csv', 'json'))
    sub.add_argument('--transcripts', help='directory for JSON transcripts')
    sub.set_defaults(func=cmd_play)

    sub = commands.add_parser('analyze', help='wedge statistics of the red subgraph')
    sub.add_argument('graph')
    sub.add_argument('colouring')
    sub.add_argument('--p', type=float, required=True)
    sub.set_defaults(func=cmd_analyze)

    sub = commands.add_parser('threshold', help='evaluate the second-round threshold')
    sub.add_argument('--n', type=int, required=True)
    sub.add_argument('--p', type=float, required=True)
    sub.set_defaults(func=cmd_threshold)

    sub = commands.add_parser('sweep', help='run a Monte Carlo sweep')
    sub.add_argument('--config', required=True)
    sub.add_argument('--out')
    sub.add_argument('--workers', type=int)
    sub.set_defaults(func=cmd_sweep)

    sub = commands.add_parser('replay', help='replay a stored transcript')
    sub.add_argument('--transcript', required=True)
    sub.set_defaults(func=cmd_replay)
    return parser


def main(argv=None):
    args = get_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    try:
        configure()
        if args.settings:
            configure_from_file(args.settings)
        if args.log_base:
            configure(LOG_BASE=args.log_base)
        return args.func(args)
    except (RamseyLabError, ImproperlyConfigured) as exc:
        logger.error('%s: %s', type(exc).__name__, exc)
        return 1


if __name__ == '__main__':
    sys.exit(main())
