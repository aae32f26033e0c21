// Stale-response discard.
//
// Each panel re-fetches whenever the view state changes, and in-flight
// requests are never cancelled.  Instead every fetch takes a ticket from a
// per-panel sequencer, and a response is applied only if its ticket is still
// the newest one issued — later requests silently win over earlier ones,
// whatever order the responses arrive in.

export class RequestSequencer {
  private issued = 0;

  /** Claim the next ticket; all earlier tickets become stale. */
  begin(): number {
    this.issued += 1;
    return this.issued;
  }

  /** True while no newer ticket has been issued. */
  isCurrent(ticket: number): boolean {
    return ticket === this.issued;
  }
}
