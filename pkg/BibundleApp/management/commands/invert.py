from django.core.management.base import CommandError

from BibundleApp import documents
from BibundleApp.exceptions import NotAnEssentialEquivalence
from BibundleApp.management.base import INVALID, DocumentCommand
from BibundleApp.morita import invert_essential_equivalence


class Command(DocumentCommand):
    help = 'Write the inverse bibundle G -> H of an essential equivalence H -> G'
    output_name = 'inverse'

    def add_arguments(self, parser):
        parser.add_argument('functor', help='Functor H -> G')
        self.add_output_arguments(parser)

    def run(self, **options):
        F = self.load(options['functor'], documents.FUNCTOR)
        try:
            certificate = invert_essential_equivalence(F)
        except NotAnEssentialEquivalence as exc:
            raise CommandError(
                f'{options["functor"]} is not an essential equivalence: '
                f'{exc.predicate} fails',
                returncode=INVALID,
            )
        self.emit(certificate.inverse, options)
