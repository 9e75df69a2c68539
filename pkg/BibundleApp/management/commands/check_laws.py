from django.conf import settings
from django.core.management.base import CommandError

from BibundleApp.lawchecks import LawBounds, run_suites
from BibundleApp.management.base import INVALID, USAGE, DocumentCommand


class Command(DocumentCommand):
    help = 'Run the randomized and exhaustive law-checking suites'

    def add_arguments(self, parser):
        parser.add_argument(
            '--seed',
            type=int,
            help='Random seed (default: BIBUNDLE_DEFAULT_SEED)'
        )
        parser.add_argument('--max-objects', type=int, default=3, help='Objects per random groupoid')
        parser.add_argument('--max-arrows', type=int, default=8, help='Arrows per random groupoid')
        parser.add_argument(
            '--cases',
            type=int,
            help='Base cases per randomized suite, scaled per suite (default: BIBUNDLE_LAW_CASES)'
        )
        parser.add_argument('--max-carrier', type=int, default=3, help='Carrier size of sampled actions')
        self.add_format_argument(parser)

    def run(self, **options):
        seed = options['seed']
        if seed is None:
            seed = getattr(settings, 'BIBUNDLE_DEFAULT_SEED', 7)
        cases = options['cases']
        if cases is None:
            cases = getattr(settings, 'BIBUNDLE_LAW_CASES', 100)
        if options['max_objects'] < 1 or options['max_arrows'] < 1 or cases < 0 or options['max_carrier'] < 0:
            raise CommandError(
                '--max-objects and --max-arrows must be positive, --cases and --max-carrier non-negative',
                returncode=USAGE,
            )
        bounds = LawBounds(
            seed=seed,
            max_objects=options['max_objects'],
            max_arrows=options['max_arrows'],
            cases=cases,
            max_carrier=options['max_carrier'],
        )
        results = run_suites(bounds)
        failures = sum(len(r.failures) for r in results)
        data = {
            'seed': seed,
            'max_objects': bounds.max_objects,
            'max_arrows': bounds.max_arrows,
            'cases': bounds.cases,
            'max_carrier': bounds.max_carrier,
            'suites': [r.as_dict() for r in results],
            'verified': sum(r.cases for r in results) - failures,
            'failures': failures,
        }
        lines = [f'Law checks with seed {seed}']
        lines.append('=' * 50)
        for r in results:
            status = self.style.SUCCESS('ok') if r.passed else self.style.ERROR('FAILED')
            line = f'{r.name:<24} {r.cases:>5} case(s)'
            if r.skipped:
                line += f', {r.skipped} skipped'
            lines.append(f'{line}  {status}')
            for failure in r.failures:
                lines.append(f'    case {failure["case"]}: {failure["detail"]}')
        lines.append('=' * 50)
        lines.append(f'Verified instances: {data["verified"]}')
        self.report(data, lines, options)
        if failures:
            raise CommandError(f'{failures} law check(s) failed', returncode=INVALID)
