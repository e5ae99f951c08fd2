import configargparse
import itertools
import multiprocessing as mp
import os
import pandas as pd
import utils
from tqdm import tqdm
from typing import Tuple
from impl.device import VariationSpec, get_device_preset
from impl.tuning import TuneConfig, monte_carlo_yield


SEED = 310


def _eval_grid(preset: str, n_devices: int, params: dict, num_processes: int, output_dir: str):
    inputs = [(preset, n_devices, tuple(params.keys()), param_config) for param_config in itertools.product(*params.values())]
    with mp.Pool(processes=num_processes) as pool:
        df = pd.DataFrame([res for res in tqdm(pool.imap_unordered(_eval_param_config, inputs), total=len(inputs), desc='Evaluating tuning yield')])
    df = df.sort_values(list(params.keys())).reset_index(drop=True)
    os.makedirs(output_dir, exist_ok=True)
    filepath = utils.get_results_file('results.tuning_yield', output_dir)
    df.to_csv(filepath, index=False)
    utils.get_logger().info(f'Wrote yield grid of {len(df)} configurations to {filepath}.')


def _eval_param_config(args: Tuple[str, int, tuple, tuple]) -> dict:
    preset, n_devices, param_names, param_config = args
    param_dict = dict(zip(param_names, param_config))
    variation = VariationSpec(param_dict['sigma_d2d'], param_dict['sigma_c2c'], SEED)
    summary = monte_carlo_yield(get_device_preset(preset), variation, param_dict['target'], TuneConfig(), n_devices, SEED)
    return param_dict | summary._asdict()


if __name__ == '__main__':
    parser = configargparse.ArgumentParser(description='Estimate the write-verify yield over a grid of device variations and targets.')
    parser.add_argument('config_file', is_config_file=True, help='Path to grid config file')
    parser.add_argument('--preset', type=str, default='pt_tio2', help='Device parameter preset')
    parser.add_argument('-n', '--n_devices', type=int, default=1000, help='Number of Monte-Carlo devices per configuration')
    parser.add_argument('--sigma_d2d', action='append', type=float, help='Device-to-device spread')
    parser.add_argument('--sigma_c2c', action='append', type=float, help='Cycle-to-cycle spread')
    parser.add_argument('--target', action='append', type=float, help='Target memristance in ohms')
    parser.add_argument('-o', '--out', type=str, default='results/tuning-yield', help='Output directory')
    parser.add_argument('--cpus', type=int, default=utils.get_config('max_cpus'), help='Number of CPUs to use')
    args = parser.parse_args()
    # disable debug logging
    utils.get_logger().setLevel('INFO')
    params = {n: getattr(args, n) or [0.0] for n in ['sigma_d2d', 'sigma_c2c']}
    params['target'] = args.target or [2000.0]
    _eval_grid(args.preset, args.n_devices, params, args.cpus, args.out)
