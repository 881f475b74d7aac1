"""fit: polynomial surrogate from a samples CSV."""
import click

from ppa_explorer.commands.common import crash, fail
from ppa_explorer.config import Config
from ppa_explorer.models.report import REQUIRED_UNITS, RunReport
from ppa_explorer.services.errors import PPAExplorerError, RankDeficiencyError
from ppa_explorer.services.regression import TARGETS, fit_poly, load_samples, save_model
from ppa_explorer.services.report import file_digest, write_report


@click.command('fit')
@click.option('--samples', 'samples_path', required=True, type=click.Path(dir_okay=False),
              help='Points CSV from explore, or a feature/target CSV.')
@click.option('--target', required=True, type=click.Choice(list(TARGETS)))
@click.option('--max-degree', type=int, default=Config.MAX_DEGREE, show_default=True)
@click.option('--folds', type=int, default=Config.CV_FOLDS, show_default=True)
@click.option('--seed', type=int, default=Config.CV_SEED, show_default=True)
@click.option('--no-ridge', is_flag=True, help='Fail on a rank-deficient design matrix.')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Model JSON path.')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='Also write a JSON run report with the model.')
def fit(samples_path, target, max_degree, folds, seed, no_ridge, out, report_path):
    """Fit a surrogate with k-fold degree selection."""
    try:
        samples, names = load_samples(samples_path, target)
        model = fit_poly(samples, max_degree=max_degree, k=folds, seed=seed,
                         feature_names=names, target_name=target, allow_ridge=not no_ridge)
        save_model(model, out)
        if report_path:
            write_report(RunReport(
                tool_version=Config.TOOL_VERSION,
                kind='fit',
                input_digests={'samples': file_digest(samples_path)},
                units=dict(REQUIRED_UNITS['fit']),
                model=model,
            ), report_path)
    except RankDeficiencyError as e:
        fail(str(e), 4)
    except PPAExplorerError as e:
        fail(str(e), 1)
    except OSError as e:
        fail(str(e), 1)
    except Exception as e:
        crash(e)

    mean = sum(s.target for s in samples) / len(samples)
    click.echo(f'samples       {len(samples)}')
    click.echo(f'degree        {model.degree}')
    click.echo(f'cv_rmse       {model.cv_rmse:.6e}')
    if mean:
        click.echo(f'cv_rmse/mean  {model.cv_rmse / abs(mean):.6e}')
    if model.ridge_fallback:
        click.echo('ridge         fallback used (rank-deficient design matrix)')
    click.echo(f'model         {out}')
