from BibundleApp import documents
from BibundleApp.functor import induce
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Induce a G-action from an H-action along a functor H -> G'
    output_name = 'induced'

    def add_arguments(self, parser):
        parser.add_argument('functor', help='Functor H -> G')
        parser.add_argument('action', help='Action of H')
        self.add_output_arguments(parser)

    def run(self, **options):
        F = self.load(options['functor'], documents.FUNCTOR)
        Y = self.load(options['action'], documents.ACTION)
        self.emit(induce(F, Y), options)
