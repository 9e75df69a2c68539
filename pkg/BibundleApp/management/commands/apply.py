from BibundleApp import documents
from BibundleApp.bibundle import tensor_apply
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Carry an H-action along a bibundle H -> G to a G-action'
    output_name = 'applied'

    def add_arguments(self, parser):
        parser.add_argument('bibundle', help='Bibundle H -> G')
        parser.add_argument('action', help='Action of H')
        self.add_output_arguments(parser)

    def run(self, **options):
        P = self.load(options['bibundle'], documents.BIBUNDLE)
        Y = self.load(options['action'], documents.ACTION)
        self.emit(tensor_apply(P, Y), options)
