# -*- coding: utf-8 -*-
"""Command line interface.

Command line interface provides the following commands:

- budget - link budget of a scenario for both diffraction models;
- simulate - simulated time tags of a pass;
- analyze - detection statistics of a tag file;
- response - temporal signature of the satellite array;
- project - detection rate and SNR of an upgraded link.

Exit codes are 0 on success, 2 on usage or configuration errors and 3 on
data errors. Output tables are CSV files whose first line is a comment
carrying the scenario hash and the seed.
"""

import argparse
import json
import logging
import math
import os
import sys

import pandas as pd

from gnssqlink import __version__
from gnssqlink.analysis import (Histogram, PassSummary,
                                estimate_pass_summary, filter_intervals,
                                interval_stats, period_occupancy, residuals)
from gnssqlink.ccr_response import (lobe_displacement, peak_to_peak,
                                    signature_span,
                                    velocity_aberration_check)
from gnssqlink.exceptions import DataError, DomainError, UsageError
from gnssqlink.link_budget import MODELS, project_upgraded_link
from gnssqlink.scenario import load_scenario, load_upgrade_plan
from gnssqlink.simulator import simulate_pass
from gnssqlink.tags import read_tag_stream, write_tag_stream

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _write_table(table, filename, scenario_hash, seed=None):
    with open(filename, 'w', newline='') as table_file:
        table_file.write("# scenario_hash={0} seed={1}\n".format(
            scenario_hash, '' if seed is None else seed))
        table.to_csv(table_file, index=False, lineterminator='\n')
    logger.debug("Wrote %s", filename)


def _write_json(data, filename):
    with open(filename, 'w') as json_file:
        json.dump(data, json_file, indent=2, sort_keys=True)
        json_file.write("\n")
    logger.debug("Wrote %s", filename)


def _make_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as err:
        raise UsageError("Could not create output directory {0}: {1}".format(
            path, err.strerror or err))


def cmd_budget(args):
    """Print the link budget of every receiving channel."""
    scenario = load_scenario(args.scenario)
    models = MODELS if args.model is None else (args.model,)
    geometry = scenario.link_geometry
    report = {'scenario_hash': scenario.hash,
              'slant_range_km': geometry.slant_range / 1e3, 'budgets': []}
    print("Scenario {0}: slant range {1:.0f} km".format(
        scenario.name, geometry.slant_range / 1e3))
    for model in models:
        for rx in scenario.receivers:
            budget = scenario.budget(model, rx, args.atmosphere_loss_db)
            entry = dict(budget.as_dict(), channel=rx.channel_id)
            report['budgets'].append(entry)
            print("{0:>13} ch{1}: l_down = {2:6.2f} dB  t_down = {3:.3e}  "
                  "l_rx = {4:5.2f} dB  t_rx = {5:.3e}".format(
                      budget.model, rx.channel_id, budget.l_down,
                      budget.t_down, budget.l_rx, budget.t_rx))
    theta_d = lobe_displacement(geometry.wavelength,
                                scenario.satellite.ccr.diameter)
    on_lobe, _ = velocity_aberration_check(theta_d)
    report['lobe_displacement_urad'] = theta_d * 1e6
    report['on_lateral_lobe'] = on_lobe
    print("Lobe displacement {0:.1f} urad; telescope {1} a lateral lobe"
          "".format(theta_d * 1e6, "on" if on_lobe else "off"))
    if args.out:
        _write_json(report, args.out)
    return EXIT_OK


def cmd_simulate(args):
    """Simulate the time tags of a pass and write them to a file."""
    scenario = load_scenario(args.scenario)
    stream = simulate_pass(scenario, args.duration_s, args.seed,
                           workers=args.workers, dead_time=args.dead_time_ps,
                           verbose=args.verbose)
    write_tag_stream(stream, args.out, with_truth=not args.no_truth)
    counts = stream.counts()
    print("Simulated {0} s: {1} detections ({2}) -> {3}".format(
        args.duration_s, len(stream),
        ", ".join("{0} {1}".format(n, name) for name, n in counts.items()),
        args.out))
    return EXIT_OK


def _analyze_channel(scenario, stream, channel, out_dir):
    params = scenario.analysis
    arrivals = scenario.arrivals()
    tags = stream.select(channel)
    rs = residuals(tags, arrivals)
    stats = interval_stats(rs, arrivals, params.interval, params.window,
                           params.duty_cycle, params.exclusion,
                           params.threshold)
    selected = filter_intervals(stats, params.threshold)
    budget = scenario.budget(receiver=scenario.receiver(channel))
    summary = estimate_pass_summary(selected, budget, scenario.rep_rate,
                                    channel)
    histogram = Histogram.from_residuals(
        rs.in_intervals([s.k for s in selected], params.interval),
        params.bin_width)
    occupancy = period_occupancy(tags, scenario.schedule, arrivals)
    seed = stream.metadata.get('seed')

    _write_table(pd.DataFrame([s.as_dict() for s in stats],
                              columns=['k', 'tau_s', 'n_tot_w', 'n_bkg_w',
                                       'n_det', 'r_det_hz', 'bkg_rate_w_hz',
                                       'snr', 'selected']),
                 os.path.join(out_dir, "intervals_ch{}.csv".format(channel)),
                 scenario.hash, seed)
    _write_table(pd.DataFrame({'center_ps': histogram.centers,
                               'count': histogram.counts}),
                 os.path.join(out_dir, "histogram_ch{}.csv".format(channel)),
                 scenario.hash, seed)
    table = pd.DataFrame({'center_ms': occupancy.centers})
    for name in occupancy.counts:
        table[name + '_hz'] = occupancy.rates(name)
    _write_table(table, os.path.join(out_dir,
                                     "occupancy_ch{}.csv".format(channel)),
                 scenario.hash, seed)
    if len(selected):
        profile = histogram.to_profile()
        pp = peak_to_peak(profile, params.min_separation)
    else:
        pp = None
    result = summary.as_dict()
    result.update({'n_intervals': len(stats),
                   'peak_to_peak_ps': pp})
    return summary, result


def cmd_analyze(args):
    """Evaluate the detection statistics of a tag file."""
    scenario = load_scenario(args.scenario)
    stream = read_tag_stream(args.tags)
    tagged_hash = stream.metadata.get('scenario_hash')
    if tagged_hash and tagged_hash != scenario.hash:
        logger.warning("Tags were produced by another scenario (%s).",
                       tagged_hash[:12])
    channels = stream.channel_ids if args.channel is None else [args.channel]
    if not channels:
        channels = [rx.channel_id for rx in scenario.receivers]
    _make_dir(args.out)
    report = {'scenario_hash': scenario.hash,
              'seed': stream.metadata.get('seed'),
              'analysis': scenario.analysis.as_dict(), 'channels': []}
    for channel in channels:
        summary, result = _analyze_channel(scenario, stream, channel,
                                           args.out)
        report['channels'].append(result)
        _print_summary(summary)
    _write_json(report, os.path.join(args.out, "summary.json"))
    return EXIT_OK


def _print_summary(summary):
    if summary.no_signal:
        print("ch{}: no signal".format(summary.channel))
    else:
        print("ch{0}: R_det = {1:.1f} +/- {2:.1f} Hz  SNR = {3:.3g}  "
              "mu_sat = {4:.3g} ({5} intervals)".format(
                  summary.channel, summary.r_det, summary.r_det_error,
                  summary.snr, summary.mu_sat, summary.n_selected))


def cmd_response(args):
    """Write the temporal signature of the satellite array for a list of
    incidence angles.
    """
    scenario = load_scenario(args.scenario)
    incidences = args.incidence_deg
    if not incidences:
        incidences = [math.degrees(scenario.incidence)]
    _make_dir(args.out)
    rows = []
    for degrees in incidences:
        incidence = math.radians(degrees)
        profile = scenario.impulse_response(incidence, args.jitter_ps)
        pp = peak_to_peak(profile, scenario.analysis.min_separation)
        span = signature_span(scenario.array_geometry, incidence,
                              scenario.azimuth)
        rows.append({'incidence_deg': degrees, 'peak_to_peak_ps': pp,
                     'span_ps': span})
        _write_table(pd.DataFrame({'time_ps': profile.centers,
                                   'density_per_ps': profile.densities}),
                     os.path.join(args.out, "response_{:g}deg.csv".format(
                         degrees)), scenario.hash)
        print("{0:5.1f} deg: peak-to-peak {1:4.0f} ps, span {2:4.0f} ps"
              "".format(degrees, pp, span))
    _write_table(pd.DataFrame(rows), os.path.join(args.out,
                                                  "peak_to_peak.csv"),
                 scenario.hash)
    return EXIT_OK


def _load_summary(filename, channel):
    try:
        with open(filename) as summary_file:
            report = json.load(summary_file)
    except (OSError, ValueError) as err:
        raise DataError("Could not read summary {0}: {1}".format(filename,
                                                                  err))
    for entry in report.get('channels', []):
        if channel is None or entry.get('channel') == channel:
            return PassSummary(entry.get('r_det_hz'), entry.get('snr'),
                               entry.get('mu_sat'), channel=entry.get(
                                   'channel'),
                               no_signal=bool(entry.get('no_signal')))
    raise DataError("Could not find channel {0} in summary {1}.".format(
        channel, filename))


def cmd_project(args):
    """Project detection rate and SNR of the link upgraded by a plan."""
    scenario = load_scenario(args.scenario)
    plan = load_upgrade_plan(args.plan)
    summary = None
    if args.summary:
        summary = _load_summary(args.summary, args.channel)
        if summary.no_signal:
            raise DataError("Could not project upgraded link: the summary "
                            "reports no signal.")
    channel = args.channel if args.channel is not None else \
        (summary.channel if summary is not None else None)
    baseline = scenario.baseline(summary, channel)
    rx = scenario.receivers[0] if channel is None \
        else scenario.receiver(channel)
    projection = project_upgraded_link(baseline, plan,
                                       scenario.link_geometry,
                                       scenario.budget(receiver=rx))
    print("Baseline:  R_det = {0:.4g} Hz  SNR = {1:.3g}".format(
        baseline.r_det, baseline.snr))
    print("Projected: R_det = {0:.4g} Hz  SNR = {1:.3g}  (diffraction gain "
          "{2:.1f} dB)".format(projection.r_det, projection.snr,
                               projection.diffraction_gain))
    if args.out:
        _write_json({'scenario_hash': scenario.hash,
                     'baseline': baseline.as_dict(),
                     'projection': projection.as_dict()}, args.out)
    return EXIT_OK


def build_parser():
    """Build the parser of the command line."""
    parser = argparse.ArgumentParser(
        prog="gnssqlink",
        description="Two-way single-photon link with GNSS retroreflectors.")
    parser.add_argument('--version', action='version',
                        version="%(prog)s " + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', required=True,
                        help="scenario file (JSON)")
    common.add_argument('--verbose', action='store_true',
                        help="display confirmation messages")
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    budget = commands.add_parser('budget', parents=[common],
                                 help="link budget of a scenario")
    budget.add_argument('--model', choices=['ffdp', 'cross-section'],
                        help="diffraction model (default: both)")
    budget.add_argument('--atmosphere-loss-db', type=float,
                        help="atmospheric loss overriding the scenario one")
    budget.add_argument('--out', help="budget report (JSON)")
    budget.set_defaults(func=cmd_budget)

    simulate = commands.add_parser('simulate', parents=[common],
                                   help="simulate the time tags of a pass")
    simulate.add_argument('--duration-s', type=float, required=True)
    simulate.add_argument('--seed', type=int, default=0)
    simulate.add_argument('--out', required=True, help="tag file (CSV)")
    simulate.add_argument('--workers', type=int, default=1)
    simulate.add_argument('--dead-time-ps', type=float, default=None)
    simulate.add_argument('--no-truth', action='store_true',
                          help="omit the truth column")
    simulate.set_defaults(func=cmd_simulate)

    analyze = commands.add_parser('analyze', parents=[common],
                                  help="detection statistics of tags")
    analyze.add_argument('--tags', required=True, help="tag file (CSV)")
    analyze.add_argument('--out', required=True, help="output directory")
    analyze.add_argument('--channel', type=int, default=None)
    analyze.set_defaults(func=cmd_analyze)

    response = commands.add_parser('response', parents=[common],
                                   help="temporal signature of the array")
    response.add_argument('--incidence-deg', type=float, nargs='*',
                          default=None)
    response.add_argument('--jitter-ps', type=float, default=None,
                          help="detector jitter FWHM added to the pulse")
    response.add_argument('--out', required=True, help="output directory")
    response.set_defaults(func=cmd_response)

    project = commands.add_parser('project', parents=[common],
                                  help="project an upgraded link")
    project.add_argument('--plan', required=True, help="upgrade plan (JSON)")
    project.add_argument('--summary', default=None,
                         help="pass summary from analyze (JSON)")
    project.add_argument('--channel', type=int, default=None)
    project.add_argument('--out', help="projection report (JSON)")
    project.set_defaults(func=cmd_project)
    return parser


def main(argv=None):
    """Run a command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    logging.basicConfig(level=logging.INFO if args.verbose
                        else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError) as err:
        print("gnssqlink: error: {}".format(err), file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print("gnssqlink: error: Could not write output: {}".format(
            err.strerror or err), file=sys.stderr)
        return EXIT_USAGE
    except DataError as err:
        print("gnssqlink: error: {}".format(err), file=sys.stderr)
        return EXIT_DATA
