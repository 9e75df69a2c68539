from django.core.management.base import CommandError

from BibundleApp import documents
from BibundleApp.bibundle import check_points_functor, points_groupoid
from BibundleApp.finset import FinSet
from BibundleApp.management.base import INVALID, USAGE, DocumentCommand


class Command(DocumentCommand):
    help = 'Build the groupoid of I-indexed points of G and check it embeds fully faithfully'

    def add_arguments(self, parser):
        parser.add_argument('groupoid', help='Groupoid document')
        parser.add_argument('stage_size', type=int, help='Size of the index set I')
        self.add_format_argument(parser)

    def run(self, **options):
        G = self.load(options['groupoid'], documents.GROUPOID)
        if options['stage_size'] < 0:
            raise CommandError('stage size must be non-negative', returncode=USAGE)
        I = FinSet(options['stage_size'])
        points = points_groupoid(G, I).groupoid
        check = check_points_functor(G, I)
        data = {
            'objects': points.objects.size,
            'arrows': points.arrows.size,
            'faithful': check.faithful,
            'full': check.full,
            'pairs_checked': check.pairs_checked,
        }
        verdict = 'fully faithful' if check.faithful and check.full else 'NOT fully faithful'
        style = self.style.SUCCESS if check.faithful and check.full else self.style.ERROR
        lines = [
            f'{points.objects.size} object(s), {points.arrows.size} arrow(s)',
            style(f'points functor is {verdict} on {check.pairs_checked} hom-set(s)'),
        ]
        self.report(data, lines, options)
        if not (check.faithful and check.full):
            raise CommandError('points functor check failed', returncode=INVALID)
