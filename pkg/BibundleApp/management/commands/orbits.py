from BibundleApp import documents
from BibundleApp.action import orbits
from BibundleApp.management.base import DocumentCommand


class Command(DocumentCommand):
    help = 'List the orbits (connected components) of an action'

    def add_arguments(self, parser):
        parser.add_argument('action', help='Action document file or db:<name>')
        self.add_format_argument(parser)

    def run(self, **options):
        A = self.load(options['action'], documents.ACTION)
        quotient = orbits(A)
        classes = [list(quotient.members(c)) for c in quotient.classes]
        data = {
            'carrier': A.carrier.size,
            'orbits': quotient.classes.size,
            'classes': [
                {'members': members, 'objects': sorted({A.anchor(x) for x in members})}
                for members in classes
            ],
        }
        lines = [f'{quotient.classes.size} orbit(s) on {A.carrier.size} element(s)']
        for c, entry in enumerate(data['classes']):
            lines.append(f'  [{c}] elements {entry["members"]} over objects {entry["objects"]}')
        self.report(data, lines, options)
