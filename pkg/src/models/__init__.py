# Value Objects and Records
