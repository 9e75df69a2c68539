from BibundleApp import documents
from BibundleApp.bibundle import span
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'Write the action groupoid of a bibundle (the apex of its span)'
    output_name = 'span'

    def add_arguments(self, parser):
        parser.add_argument('bibundle', help='Bibundle H -> G')
        self.add_output_arguments(parser)

    def run(self, **options):
        P = self.load(options['bibundle'], documents.BIBUNDLE)
        self.emit(span(P).groupoid, options)
