from BibundleApp import documents
from BibundleApp.functor import restrict
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Restrict a G-action along a functor H -> G'
    output_name = 'restricted'

    def add_arguments(self, parser):
        parser.add_argument('functor', help='Functor H -> G')
        parser.add_argument('action', help='Action of G')
        self.add_output_arguments(parser)

    def run(self, **options):
        F = self.load(options['functor'], documents.FUNCTOR)
        A = self.load(options['action'], documents.ACTION)
        self.emit(restrict(F, A), options)
